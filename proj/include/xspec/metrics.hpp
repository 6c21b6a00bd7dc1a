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

#ifndef XSPEC_METRICS_HPP
#define XSPEC_METRICS_HPP

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "xspec/scores.hpp"

namespace xspec {

struct RocPoint {
  double threshold;
  double far;
  double gar;
};

/// ROC over the acceptance rule `score >= threshold`, thresholds drawn
/// from the unique score values plus +infinity.
///
/// Two views of the same sweep are kept. `path` holds one point per
/// threshold in decreasing-threshold order, so FAR and GAR are both
/// non-decreasing along it; EER and AUC are defined on this path
/// (collapsing it first would bias both through the vertical jumps).
/// `points` is the presentation curve: FAR strictly increasing, ties
/// collapsed to the maximum GAR reached at that FAR, bracketed by the
/// (far=0, ...) and (far=1, gar=1) sentinels. GAR@FAR interpolates
/// `points`.
struct RocCurve {
  std::vector<RocPoint> points;
  std::vector<RocPoint> path;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

struct BiometricReport {
  std::vector<std::pair<double, double>> gar_at_far;  // (far level, gar)
  double eer = 0.0;
  double d_prime = 0.0;
  double auc = 0.0;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

RocCurve roc_curve(const ScoreSet& s);

/// GAR linearly interpolated in FAR between adjacent presentation
/// points; far_level must lie in (0,1].
double gar_at_far(const RocCurve& r, double far_level);

/// The value where FAR = FRR = 1 - GAR on the piecewise-linear curve:
/// sign change of (FAR - FRR) between adjacent path points, then linear
/// interpolation along that segment.
double eer(const RocCurve& r);

/// |mu_g - mu_i| / sqrt((var_g + var_i)/2) with sample (n-1) variances.
/// Needs >= 2 scores per class. Both variances zero: equal means give 0
/// by convention, unequal means are reported as a degenerate-input
/// error (the value would be infinite).
double d_prime(const ScoreSet& s);

/// Trapezoidal integral of GAR over FAR on [0,1] along the full path;
/// equals the Mann-Whitney statistic P(g > i) + P(g = i)/2.
double auc(const RocCurve& r);

/// All scalar metrics plus GAR at each requested FAR level.
BiometricReport make_report(const ScoreSet& s,
                            const std::vector<double>& far_levels);

/// Writes the presentation points as `threshold,far,gar` rows, shortest
/// round-trip float formatting.
void write_roc_csv(const std::filesystem::path& path, const RocCurve& r);

}  // namespace xspec

#endif  // XSPEC_METRICS_HPP
