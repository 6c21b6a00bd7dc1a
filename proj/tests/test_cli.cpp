// Copyright 2026 The xspec-eval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xspec/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "xspec/netspec.hpp"
#include "xspec/tensor.hpp"

using namespace xspec;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory per test case, removed on destruction.
struct Scratch {
  fs::path dir;

  explicit Scratch(const std::string& name) {
    dir = fs::temp_directory_path() / ("xspec_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream os(p);
  os << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const char* kPerfectScores =
    "probe_id,probe_subject,gallery_id,gallery_subject,score\n"
    "p1,A,g1,A,0.9\n"
    "p2,B,g2,B,0.8\n"
    "p3,A,g3,C,0.2\n"
    "p4,B,g4,D,0.1\n";

}  // namespace

TEST_CASE("eval writes report, roc csv, and roc svg") {
  Scratch s("eval");
  write_file(s.dir / "scores.csv", kPerfectScores);

  RunConfig cfg;
  cfg.subcommand = "eval";
  cfg.scores = s.dir / "scores.csv";
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);

  CHECK(fs::exists(cfg.out_dir / "roc.csv"));
  CHECK(fs::exists(cfg.out_dir / "roc.svg"));
  auto j = nlohmann::json::parse(read_file(cfg.out_dir / "report.json"));
  CHECK(j["eer"].get<double>() == 0.0);
  CHECK(j["auc"].get<double>() == 1.0);
  CHECK(j["n_genuine"].get<int>() == 2);
  CHECK(j["n_impostor"].get<int>() == 2);
  // Default FAR grid is 1e-1 and 1e-3; perfect separation gives 1.0.
  CHECK(j["gar_at_far"].size() == 2);
  for (const auto& [key, value] : j["gar_at_far"].items()) {
    CHECK(value.get<double>() == 1.0);
  }
  std::string svg = read_file(cfg.out_dir / "roc.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("fuse on identical inputs reduces sawf to the arithmetic mean") {
  Scratch s("fuse_ident");
  write_file(s.dir / "vis.csv", kPerfectScores);
  write_file(s.dir / "ir.csv", kPerfectScores);

  RunConfig cfg;
  cfg.subcommand = "fuse";
  cfg.scores_vis = s.dir / "vis.csv";
  cfg.scores_ir = s.dir / "ir.csv";
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);

  // Equal qualities tie the d-primes, so the weights collapse to 1/2
  // and the fused CSVs must agree byte for byte.
  auto weights =
      nlohmann::json::parse(read_file(cfg.out_dir / "sawf_weights.json"));
  CHECK(weights["w1"].get<double>() == 0.5);
  CHECK(weights["w2"].get<double>() == 0.5);
  CHECK(read_file(cfg.out_dir / "fused_sawf.csv") ==
        read_file(cfg.out_dir / "fused_arithmetic_average.csv"));

  for (const char* rule : {"sawf", "maximum", "minimum", "geometric_average",
                           "arithmetic_average", "median"}) {
    CHECK(fs::exists(cfg.out_dir / ("fused_" + std::string(rule) + ".csv")));
    CHECK(fs::exists(cfg.out_dir / ("report_" + std::string(rule) + ".json")));
  }

  // The comparison table reports percentages, one row per rule.
  std::string table = read_file(cfg.out_dir / "comparison.csv");
  CHECK(table.find("rule,gar_pct_at_far_0.1,gar_pct_at_far_0.001,"
                   "eer_pct,d_prime,auc\n") == 0);
  CHECK(table.find("\nsawf,100,100,0,") != std::string::npos);
}

TEST_CASE("synth runs are byte-identical and honor the seed") {
  Scratch s("synth");
  RunConfig cfg;
  cfg.subcommand = "synth";
  cfg.seed = 7;
  cfg.n_genuine = 40;
  cfg.n_impostor = 60;
  cfg.out_dir = s.dir / "a";
  REQUIRE(run(cfg) == 0);
  cfg.out_dir = s.dir / "b";
  REQUIRE(run(cfg) == 0);
  std::string a = read_file(s.dir / "a" / "synth.csv");
  CHECK(a == read_file(s.dir / "b" / "synth.csv"));
  CHECK(!a.empty());

  cfg.seed = 8;
  cfg.out_dir = s.dir / "c";
  REQUIRE(run(cfg) == 0);
  CHECK(a != read_file(s.dir / "c" / "synth.csv"));
}

TEST_CASE("fid subcommand computes the distance between feature files") {
  Scratch s("fid");
  write_file(s.dir / "x.csv",
             "sample_id,f0,f1\n"
             "a,1,0\n"
             "b,-1,0\n"
             "c,0,1\n"
             "d,0,-1\n");
  // Same cloud shifted by (3,4): only the mean term survives.
  write_file(s.dir / "y.csv",
             "sample_id,f0,f1\n"
             "a,4,4\n"
             "b,2,4\n"
             "c,3,5\n"
             "d,3,3\n");
  RunConfig cfg;
  cfg.subcommand = "fid";
  cfg.features_x = s.dir / "x.csv";
  cfg.features_y = s.dir / "y.csv";
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(read_file(cfg.out_dir / "fid.json"));
  CHECK(j["fid"].get<double>() == doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("losses subcommand reads the tensor directory layout") {
  Scratch s("losses");
  Tensor half = Tensor::full({1, 2, 2}, 0.5);
  for (const char* stem : {"v", "i", "g_v", "f_i", "fgv", "gfi"}) {
    write_tensor(s.dir / (std::string(stem) + ".tnsr"), half);
  }
  Tensor p = Tensor::full({1}, 0.5);
  for (const char* stem :
       {"p_real_ir", "p_fake_ir", "p_real_vis", "p_fake_vis"}) {
    write_tensor(s.dir / (std::string(stem) + ".tnsr"), p);
  }
  std::string emb = "sample_id";
  for (int m = 0; m < 128; ++m) emb += ",f" + std::to_string(m);
  std::string row;
  for (int m = 0; m < 128; ++m) row += ",0.5";
  emb += "\nvis" + row + "\nir" + row + "\n";
  write_file(s.dir / "embeddings.csv", emb);

  RunConfig cfg;
  cfg.subcommand = "losses";
  cfg.tensors_dir = s.dir;
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);
  auto j = nlohmann::json::parse(read_file(cfg.out_dir / "losses.json"));
  CHECK(j["l_gan"].get<double>() ==
        doctest::Approx(4.0 * std::log(0.5)).epsilon(1e-12));
  CHECK(j["l_cyc"].get<double>() == 0.0);
  CHECK(j["l_syn"].get<double>() == 0.0);
  CHECK(j["l_idr"].get<double>() == 0.0);
  CHECK(j["total"].get<double>() ==
        doctest::Approx(4.0 * std::log(0.5)).epsilon(1e-12));

  // A wrong embedding row count is rejected and the partial output is
  // cleaned up.
  write_file(s.dir / "embeddings.csv", emb + "extra" + row + "\n");
  RunConfig bad = cfg;
  bad.out_dir = s.dir / "bad";
  CHECK(run(bad) != 0);
  CHECK(!fs::exists(bad.out_dir / "losses.json"));
}

TEST_CASE("netspec subcommand reports shapes and parameter totals") {
  Scratch s("netspec");
  RunConfig cfg;
  cfg.subcommand = "netspec";
  cfg.network = "discriminator";
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);
  std::string body = read_file(cfg.out_dir / "netspec.txt");
  CHECK(body.find("network: discriminator") != std::string::npos);
  CHECK(body.find("out 1x30x30") != std::string::npos);
  CHECK(body.find("total parameters: 2764481") != std::string::npos);
  CHECK(body.find("analytic receptive field: 70") != std::string::npos);

  // Feeding a spec file reproduces the builtin output.
  NetworkSpec net = builtin("discriminator");
  write_file(s.dir / "net.json", network_to_json(net));
  RunConfig from_json = cfg;
  from_json.network.clear();
  from_json.network_json = s.dir / "net.json";
  from_json.out_dir = s.dir / "out2";
  REQUIRE(run(from_json) == 0);
  CHECK(read_file(from_json.out_dir / "netspec.txt") == body);

  // The generator contains transposed stages, so the analytic field is
  // reported as unavailable rather than silently wrong.
  RunConfig gen = cfg;
  gen.network = "generator";
  gen.out_dir = s.dir / "out3";
  REQUIRE(run(gen) == 0);
  CHECK(read_file(gen.out_dir / "netspec.txt")
            .find("analytic receptive field: n/a") != std::string::npos);
}

TEST_CASE("failed runs exit nonzero and remove partial outputs") {
  Scratch s("cleanup");
  // zscore normalization makes roughly half the scores negative, which
  // the geometric average then rejects; by that time the sawf files
  // were already written and must be removed again.
  ScoreSet vis = synth_scores(3, 30, 30, 0.7, 0.1, 0.4, 0.1);
  ScoreSet ir = synth_scores(4, 30, 30, 0.75, 0.08, 0.35, 0.1);
  write_scores(s.dir / "vis.csv", vis);
  write_scores(s.dir / "ir.csv", ir);

  RunConfig cfg;
  cfg.subcommand = "fuse";
  cfg.scores_vis = s.dir / "vis.csv";
  cfg.scores_ir = s.dir / "ir.csv";
  cfg.normalization = NormMethod::kZScore;
  cfg.out_dir = s.dir / "out";
  CHECK(run(cfg) != 0);
  CHECK(!fs::exists(cfg.out_dir / "sawf_weights.json"));
  CHECK(!fs::exists(cfg.out_dir / "fused_sawf.csv"));
  CHECK(!fs::exists(cfg.out_dir / "comparison.csv"));

  // Missing input file: nothing at all gets written.
  RunConfig missing;
  missing.subcommand = "eval";
  missing.scores = s.dir / "nope.csv";
  missing.out_dir = s.dir / "out_missing";
  CHECK(run(missing) != 0);
  CHECK(!fs::exists(missing.out_dir / "report.json"));

  RunConfig unknown;
  unknown.subcommand = "transmogrify";
  unknown.out_dir = s.dir / "out_unknown";
  CHECK(run(unknown) != 0);

  RunConfig bad_far;
  bad_far.subcommand = "eval";
  bad_far.scores = s.dir / "vis.csv";
  bad_far.far_points = {0.0};
  bad_far.out_dir = s.dir / "out_far";
  CHECK(run(bad_far) != 0);
}

TEST_CASE("eval applies the requested normalization first") {
  Scratch s("norm");
  write_file(s.dir / "scores.csv", kPerfectScores);
  RunConfig cfg;
  cfg.subcommand = "eval";
  cfg.scores = s.dir / "scores.csv";
  cfg.normalization = NormMethod::kMinMax;
  cfg.out_dir = s.dir / "out";
  REQUIRE(run(cfg) == 0);
  // Rank metrics are unchanged by the monotone rescale; the ROC csv
  // now carries thresholds in [0,1].
  auto j = nlohmann::json::parse(read_file(cfg.out_dir / "report.json"));
  CHECK(j["eer"].get<double>() == 0.0);
  std::string roc = read_file(cfg.out_dir / "roc.csv");
  CHECK(roc.find("threshold,far,gar") == 0);
  CHECK(roc.find("0.9") == std::string::npos);
}

TEST_CASE("repeated runs produce byte-identical artifacts") {
  Scratch s("determinism");
  ScoreSet vis = synth_scores(11, 50, 80, 0.7, 0.1, 0.4, 0.1);
  ScoreSet ir = synth_scores(12, 50, 80, 0.75, 0.08, 0.35, 0.1);
  write_scores(s.dir / "vis.csv", vis);
  write_scores(s.dir / "ir.csv", ir);

  RunConfig cfg;
  cfg.subcommand = "fuse";
  cfg.scores_vis = s.dir / "vis.csv";
  cfg.scores_ir = s.dir / "ir.csv";
  cfg.out_dir = s.dir / "r1";
  REQUIRE(run(cfg) == 0);
  cfg.out_dir = s.dir / "r2";
  REQUIRE(run(cfg) == 0);
  for (const char* name :
       {"sawf_weights.json", "fused_sawf.csv", "report_sawf.json",
        "comparison.csv", "fused_median.csv", "report_median.json"}) {
    CHECK(read_file(s.dir / "r1" / name) == read_file(s.dir / "r2" / name));
  }
}
