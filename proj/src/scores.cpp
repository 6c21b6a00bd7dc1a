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

#include "xspec/scores.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "text_util.hpp"
#include "xspec/errors.hpp"

namespace xspec {

namespace {

constexpr const char* kHeader =
    "probe_id,probe_subject,gallery_id,gallery_subject,score";

/// Standard-normal sampler: mt19937_64 plus an explicit Box-Muller
/// transform. std::normal_distribution's algorithm is implementation
/// defined, which would break the frozen regression values; this keeps
/// the stream identical across standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite; u2 in [0,1).
    double u1 = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

std::vector<double> ScoreSet::genuine_scores() const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (t.genuine()) out.push_back(t.score);
  }
  return out;
}

std::vector<double> ScoreSet::impostor_scores() const {
  std::vector<double> out;
  for (const auto& t : trials) {
    if (!t.genuine()) out.push_back(t.score);
  }
  return out;
}

void ScoreSet::require_both_classes() const {
  bool has_genuine = false, has_impostor = false;
  for (const auto& t : trials) {
    (t.genuine() ? has_genuine : has_impostor) = true;
    if (has_genuine && has_impostor) return;
  }
  throw DegenerateInputError(
      "score set needs at least one genuine and one impostor trial (has " +
      std::string(has_genuine ? "no impostor" : "no genuine") + " trials)");
}

ScoreSet load_scores(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open score file: " + path.string());
  std::string line;
  if (!std::getline(is, line)) {
    throw ParseError("empty score file: " + path.string());
  }
  if (detail::strip_cr(line) != kHeader) {
    throw ParseError("bad score header at line 1 of " + path.string() +
                     " (expected '" + kHeader + "')");
  }
  ScoreSet set;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    auto stripped = detail::strip_cr(line);
    if (stripped.empty()) continue;
    auto fields = detail::split_csv(stripped);
    if (fields.size() != 5) {
      throw ParseError("expected 5 columns, got " +
                       std::to_string(fields.size()) + " at line " +
                       std::to_string(lineno) + " of " + path.string());
    }
    ScoreTrial t;
    t.probe_id = std::string(fields[0]);
    t.probe_subject = std::string(fields[1]);
    t.gallery_id = std::string(fields[2]);
    t.gallery_subject = std::string(fields[3]);
    t.score = detail::parse_double(
        fields[4], "at line " + std::to_string(lineno) + " of " + path.string());
    if (!std::isfinite(t.score)) {
      throw ParseError("non-finite score at line " + std::to_string(lineno) +
                       " of " + path.string());
    }
    set.trials.push_back(std::move(t));
  }
  if (set.trials.empty()) {
    throw ParseError("no trials in score file: " + path.string());
  }
  return set;
}

void write_scores(const std::filesystem::path& path, const ScoreSet& s) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << kHeader << "\n";
  for (const auto& t : s.trials) {
    os << t.probe_id << ',' << t.probe_subject << ',' << t.gallery_id << ','
       << t.gallery_subject << ',' << detail::fmt_double(t.score) << "\n";
  }
  if (!os) throw IoError("write failed: " + path.string());
}

ScoreSet normalize(const ScoreSet& s, NormMethod method) {
  if (method == NormMethod::kNone) return s;
  if (s.trials.empty()) {
    throw DegenerateInputError("cannot normalize an empty score set");
  }
  ScoreSet out = s;
  if (method == NormMethod::kMinMax) {
    double lo = s.trials[0].score, hi = s.trials[0].score;
    for (const auto& t : s.trials) {
      lo = std::min(lo, t.score);
      hi = std::max(hi, t.score);
    }
    if (!(hi > lo)) {
      throw DegenerateInputError("minmax normalization needs max > min");
    }
    for (auto& t : out.trials) t.score = (t.score - lo) / (hi - lo);
    return out;
  }
  // zscore
  const std::size_t n = s.trials.size();
  if (n < 2) {
    throw DegenerateInputError("zscore normalization needs >= 2 trials");
  }
  double mean = 0.0;
  for (const auto& t : s.trials) mean += t.score;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto& t : s.trials) {
    double d = t.score - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);
  double sd = std::sqrt(var);
  if (!(sd > 0.0)) {
    throw DegenerateInputError("zscore normalization needs stddev > 0");
  }
  for (auto& t : out.trials) t.score = (t.score - mean) / sd;
  return out;
}

ScoreSet distance_to_similarity(const ScoreSet& s) {
  for (const auto& t : s.trials) {
    if (t.score < 0.0) {
      throw ArgumentError("distance_to_similarity needs nonnegative scores, got " +
                          detail::fmt_double(t.score));
    }
  }
  ScoreSet out = s;
  for (auto& t : out.trials) t.score = 1.0 / (1.0 + t.score);
  return out;
}

ScoreSet synth_scores(std::uint64_t seed, std::size_t n_genuine,
                      std::size_t n_impostor, double genuine_mean,
                      double genuine_sd, double impostor_mean,
                      double impostor_sd) {
  if (n_genuine < 1 || n_impostor < 1) {
    throw ArgumentError("synth_scores needs at least 1 trial per class");
  }
  if (genuine_sd < 0.0 || impostor_sd < 0.0) {
    throw ArgumentError("synth_scores standard deviations must be >= 0");
  }
  NormalSampler sampler(seed);
  ScoreSet set;
  set.trials.reserve(n_genuine + n_impostor);
  for (std::size_t i = 0; i < n_genuine; ++i) {
    ScoreTrial t;
    t.probe_id = "pg" + std::to_string(i);
    t.probe_subject = "s" + std::to_string(i);
    t.gallery_id = "gg" + std::to_string(i);
    t.gallery_subject = "s" + std::to_string(i);
    t.score = clip01(genuine_mean + genuine_sd * sampler.next());
    set.trials.push_back(std::move(t));
  }
  for (std::size_t j = 0; j < n_impostor; ++j) {
    ScoreTrial t;
    t.probe_id = "pi" + std::to_string(j);
    t.probe_subject = "u" + std::to_string(j);
    t.gallery_id = "gi" + std::to_string(j);
    t.gallery_subject = "v" + std::to_string(j);
    t.score = clip01(impostor_mean + impostor_sd * sampler.next());
    set.trials.push_back(std::move(t));
  }
  return set;
}

}  // namespace xspec
