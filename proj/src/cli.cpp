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

#include <algorithm>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "text_util.hpp"
#include "xspec/errors.hpp"
#include "xspec/fid.hpp"
#include "xspec/fusion.hpp"
#include "xspec/losses.hpp"
#include "xspec/metrics.hpp"
#include "xspec/netspec.hpp"

namespace xspec {

namespace {

using ordered_json = nlohmann::ordered_json;

/// Remembers every file a run writes so a failed run can undo itself.
class OutputTracker {
 public:
  void wrote(const std::filesystem::path& p) { written_.push_back(p); }

  void remove_all() {
    for (const auto& p : written_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);  // best effort; nothing to do on failure
    }
    written_.clear();
  }

 private:
  std::vector<std::filesystem::path> written_;
};

void write_text_file(OutputTracker& tracker, const std::filesystem::path& path,
                     const std::string& body) {
  tracker.wrote(path);
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << body;
  if (!os) throw IoError("write failed: " + path.string());
}

ordered_json report_to_json(const BiometricReport& rep) {
  ordered_json j;
  ordered_json gars;
  for (const auto& [level, gar] : rep.gar_at_far) {
    gars[detail::fmt_double(level)] = gar;
  }
  j["gar_at_far"] = std::move(gars);
  j["eer"] = rep.eer;
  j["d_prime"] = rep.d_prime;
  j["auc"] = rep.auc;
  j["n_genuine"] = rep.n_genuine;
  j["n_impostor"] = rep.n_impostor;
  return j;
}

/// Minimal self-contained ROC plot: fixed 800x600 viewbox, axis ticks
/// every 0.2, polyline over the presentation points.
std::string roc_svg(const RocCurve& r) {
  const double x0 = 60, x1 = 780, y0 = 560, y1 = 20;
  auto sx = [&](double far) { return x0 + far * (x1 - x0); };
  auto sy = [&](double gar) { return y0 - gar * (y0 - y1); };
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  // axes
  s += "<line x1=\"60\" y1=\"560\" x2=\"780\" y2=\"560\" stroke=\"black\"/>\n";
  s += "<line x1=\"60\" y1=\"560\" x2=\"60\" y2=\"20\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double v = static_cast<double>(i) / 5.0;
    std::string label = detail::fmt_double(v);
    std::string tx = detail::fmt_double(sx(v));
    std::string ty = detail::fmt_double(sy(v));
    s += "<line x1=\"" + tx + "\" y1=\"560\" x2=\"" + tx +
         "\" y2=\"566\" stroke=\"black\"/>\n";
    s += "<text x=\"" + tx + "\" y=\"580\" font-size=\"12\" "
         "text-anchor=\"middle\">" + label + "</text>\n";
    s += "<line x1=\"54\" y1=\"" + ty + "\" x2=\"60\" y2=\"" + ty +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"48\" y=\"" + ty + "\" font-size=\"12\" "
         "text-anchor=\"end\" dominant-baseline=\"middle\">" + label +
         "</text>\n";
  }
  s += "<text x=\"420\" y=\"598\" font-size=\"14\" text-anchor=\"middle\">"
       "FAR</text>\n";
  s += "<text x=\"16\" y=\"290\" font-size=\"14\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 16 290)\">GAR</text>\n";
  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
       "points=\"";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    if (i) s += " ";
    s += detail::fmt_double(sx(r.points[i].far)) + "," +
         detail::fmt_double(sy(r.points[i].gar));
  }
  s += "\"/>\n</svg>\n";
  return s;
}

void check_far_points(const std::vector<double>& far_points) {
  if (far_points.empty()) {
    throw ArgumentError("at least one far point is required");
  }
  for (double f : far_points) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw ArgumentError("far point " + detail::fmt_double(f) +
                          " outside (0,1]");
    }
  }
}

void run_eval(const RunConfig& cfg, OutputTracker& tracker) {
  check_far_points(cfg.far_points);
  ScoreSet scores = normalize(load_scores(cfg.scores), cfg.normalization);
  RocCurve curve = roc_curve(scores);
  BiometricReport rep = make_report(scores, cfg.far_points);

  tracker.wrote(cfg.out_dir / "roc.csv");
  write_roc_csv(cfg.out_dir / "roc.csv", curve);
  write_text_file(tracker, cfg.out_dir / "roc.svg", roc_svg(curve));
  write_text_file(tracker, cfg.out_dir / "report.json",
                  report_to_json(rep).dump(2) + "\n");
}

void run_fuse(const RunConfig& cfg, OutputTracker& tracker) {
  check_far_points(cfg.far_points);
  ScoreSet vis = normalize(load_scores(cfg.scores_vis), cfg.normalization);
  ScoreSet ir = normalize(load_scores(cfg.scores_ir), cfg.normalization);

  ModalityQuality qv = modality_quality(vis, cfg.sawf_reference_far);
  ModalityQuality qi = modality_quality(ir, cfg.sawf_reference_far);
  FusionWeights w = sawf_weights(qv, qi);

  ordered_json jw;
  jw["w1"] = w.w1;
  jw["w2"] = w.w2;
  jw["reference_far"] = cfg.sawf_reference_far;
  jw["gar_vis"] = qv.gar;
  jw["d_prime_vis"] = qv.d_prime;
  jw["gar_ir"] = qi.gar;
  jw["d_prime_ir"] = qi.d_prime;
  write_text_file(tracker, cfg.out_dir / "sawf_weights.json",
                  jw.dump(2) + "\n");

  struct RuleRow {
    std::string name;
    ScoreSet fused;
  };
  std::vector<RuleRow> rows;
  rows.push_back({"sawf", fuse_weighted(w, vis, ir)});
  for (FusionRule rule :
       {FusionRule::kMaximum, FusionRule::kMinimum,
        FusionRule::kGeometricAverage, FusionRule::kArithmeticAverage,
        FusionRule::kMedian}) {
    rows.push_back({fusion_rule_name(rule), fuse_baseline(rule, vis, ir)});
  }

  std::string table = "rule";
  for (double level : cfg.far_points) {
    table += ",gar_pct_at_far_" + detail::fmt_double(level);
  }
  table += ",eer_pct,d_prime,auc\n";

  for (const auto& row : rows) {
    const std::filesystem::path csv_path =
        cfg.out_dir / ("fused_" + row.name + ".csv");
    tracker.wrote(csv_path);
    write_scores(csv_path, row.fused);

    BiometricReport rep = make_report(row.fused, cfg.far_points);
    write_text_file(tracker, cfg.out_dir / ("report_" + row.name + ".json"),
                    report_to_json(rep).dump(2) + "\n");

    table += row.name;
    for (const auto& [level, gar] : rep.gar_at_far) {
      table += "," + detail::fmt_double(gar * 100.0);
    }
    table += "," + detail::fmt_double(rep.eer * 100.0);
    table += "," + detail::fmt_double(rep.d_prime);
    table += "," + detail::fmt_double(rep.auc);
    table += "\n";
  }
  write_text_file(tracker, cfg.out_dir / "comparison.csv", table);
}

void run_fid(const RunConfig& cfg, OutputTracker& tracker) {
  FeatureSet x = load_features(cfg.features_x);
  FeatureSet y = load_features(cfg.features_y);
  ordered_json j;
  j["fid"] = fid(x, y);
  write_text_file(tracker, cfg.out_dir / "fid.json", j.dump(2) + "\n");
}

void run_losses(const RunConfig& cfg, OutputTracker& tracker) {
  auto tensor_at = [&](const char* stem) {
    return read_tensor(cfg.tensors_dir / (std::string(stem) + ".tnsr"));
  };
  ConversionBundle bundle;
  bundle.v = tensor_at("v");
  bundle.i = tensor_at("i");
  bundle.g_v = tensor_at("g_v");
  bundle.f_i = tensor_at("f_i");
  bundle.fgv = tensor_at("fgv");
  bundle.gfi = tensor_at("gfi");
  DiscriminatorProbe probe;
  probe.p_real_ir = tensor_at("p_real_ir");
  probe.p_fake_ir = tensor_at("p_fake_ir");
  probe.p_real_vis = tensor_at("p_real_vis");
  probe.p_fake_vis = tensor_at("p_fake_vis");

  FeatureSet emb = load_features(cfg.tensors_dir / "embeddings.csv");
  if (emb.n != 2) {
    throw ParseError("embeddings.csv must hold exactly 2 rows, has " +
                     std::to_string(emb.n));
  }
  Embedding128 e_vis, e_ir;
  e_vis.values.assign(emb.data.begin(), emb.data.begin() + emb.d);
  e_ir.values.assign(emb.data.begin() + emb.d, emb.data.end());

  double adv = adversarial_loss(probe);
  double cyc = cycle_loss(bundle);
  double syn = syn_loss(bundle);
  double idr = idr_loss(e_vis, e_ir);
  LossWeights weights;
  double total = composite_loss(adv, cyc, syn, idr, weights);

  ordered_json j;
  j["l_gan"] = adv;
  j["l_cyc"] = cyc;
  j["l_syn"] = syn;
  j["l_idr"] = idr;
  j["total"] = total;
  write_text_file(tracker, cfg.out_dir / "losses.json", j.dump(2) + "\n");
}

void run_netspec(const RunConfig& cfg, OutputTracker& tracker) {
  NetworkSpec net;
  if (!cfg.network_json.empty()) {
    std::ifstream is(cfg.network_json);
    if (!is) {
      throw IoError("cannot open network json: " + cfg.network_json.string());
    }
    std::string text((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
    net = network_from_json(text);
  } else if (!cfg.network.empty()) {
    net = builtin(cfg.network);
  } else {
    throw ArgumentError("netspec needs --network or --network-json");
  }

  TensorShape input{net.input_channels, cfg.shape_h, cfg.shape_w};
  std::vector<TensorShape> shapes = infer_shapes(net, input);

  std::string body;
  body += "network: " + net.name + "\n";
  body += "input: " + std::to_string(input.channels) + "x" +
          std::to_string(input.h) + "x" + std::to_string(input.w) + "\n";
  for (std::size_t idx = 0; idx < net.layers.size(); ++idx) {
    const LayerSpec& l = net.layers[idx];
    NetworkSpec single;
    single.name = "single";
    single.input_channels = l.in_ch;
    single.layers.push_back(l);
    body += "layer " + std::to_string(idx + 1) + ": ";
    switch (l.kind) {
      case LayerKind::kConv: body += "conv"; break;
      case LayerKind::kTransposedConv: body += "transposed_conv"; break;
      case LayerKind::kResidualBlock: body += "residual_block"; break;
    }
    body += " k" + std::to_string(l.kernel) + " s" + std::to_string(l.stride) +
            " p" + std::to_string(l.padding);
    body += l.pad_mode == PadMode::kReflect ? " reflect" : " zero";
    body += " " + std::to_string(l.in_ch) + "->" + std::to_string(l.out_ch);
    body += " out " + std::to_string(shapes[idx].channels) + "x" +
            std::to_string(shapes[idx].h) + "x" + std::to_string(shapes[idx].w);
    body += " params " + std::to_string(param_count(single));
    body += "\n";
  }
  body += "total parameters: " + std::to_string(param_count(net)) + "\n";

  bool all_conv = std::all_of(
      net.layers.begin(), net.layers.end(),
      [](const LayerSpec& l) { return l.kind != LayerKind::kTransposedConv; });
  if (all_conv) {
    body += "analytic receptive field: " +
            std::to_string(receptive_field(net)) + "\n";
  } else {
    body += "analytic receptive field: n/a (transposed conv present)\n";
  }
  if (cfg.empirical_rf) {
    std::size_t rf =
        empirical_receptive_field(net, cfg.seed, cfg.rf_input_size);
    body += "empirical receptive field (input " +
            std::to_string(cfg.rf_input_size) + ", seed " +
            std::to_string(cfg.seed) + "): " + std::to_string(rf) + "\n";
  }
  write_text_file(tracker, cfg.out_dir / "netspec.txt", body);
  std::cout << body;
}

void run_synth(const RunConfig& cfg, OutputTracker& tracker) {
  ScoreSet set = synth_scores(cfg.seed, cfg.n_genuine, cfg.n_impostor,
                              cfg.genuine_mean, cfg.genuine_sd,
                              cfg.impostor_mean, cfg.impostor_sd);
  const std::filesystem::path path = cfg.out_dir / "synth.csv";
  tracker.wrote(path);
  write_scores(path, set);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

}  // namespace

int run(const RunConfig& config) {
  OutputTracker tracker;
  try {
    std::filesystem::create_directories(config.out_dir);
    if (config.subcommand == "eval") {
      run_eval(config, tracker);
    } else if (config.subcommand == "fuse") {
      run_fuse(config, tracker);
    } else if (config.subcommand == "fid") {
      run_fid(config, tracker);
    } else if (config.subcommand == "losses") {
      run_losses(config, tracker);
    } else if (config.subcommand == "netspec") {
      run_netspec(config, tracker);
    } else if (config.subcommand == "synth") {
      run_synth(config, tracker);
    } else {
      throw ArgumentError("unknown subcommand '" + config.subcommand + "'");
    }
    return 0;
  } catch (const Error& e) {
    tracker.remove_all();
    std::cerr << "xspec-eval: error: " << e.category() << ": "
              << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    tracker.remove_all();
    std::cerr << "xspec-eval: error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace xspec
