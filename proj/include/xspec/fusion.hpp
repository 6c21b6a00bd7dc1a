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

#ifndef XSPEC_FUSION_HPP
#define XSPEC_FUSION_HPP

#include <string>

#include "xspec/scores.hpp"

namespace xspec {

/// Per-modality quality pair driving the self-adaptive weights: the GAR
/// measured at a configured reference FAR, and the d-prime of the
/// score distributions.
struct ModalityQuality {
  double gar = 0.0;
  double d_prime = 0.0;
};

/// Convex fusion weights; w2 is always computed as 1 - w1 so the pair
/// sums to 1 exactly.
struct FusionWeights {
  double w1 = 0.5;  // visible
  double w2 = 0.5;  // infrared
};

/// Self-adaptive weighting: the modality with the larger d-prime
/// (beyond tie_epsilon) receives its GAR share G/(G+G') as weight and
/// the other gets the remainder; a d-prime tie gives 1/2 each. If both
/// GARs are zero the ratio is undefined and the weights also fall back
/// to 1/2 each.
FusionWeights sawf_weights(const ModalityQuality& q_vis,
                           const ModalityQuality& q_ir,
                           double tie_epsilon = 1e-9);

/// Per-trial fused score w1*vis + w2*ir. Trials are aligned by
/// (probe_id, gallery_id) key, not row order; both sets must contain
/// exactly the same keys with consistent subject labels.
ScoreSet fuse_weighted(const FusionWeights& w, const ScoreSet& scores_vis,
                       const ScoreSet& scores_ir);

enum class FusionRule {
  kMaximum,
  kMinimum,
  kArithmeticAverage,
  kGeometricAverage,
  kMedian,
  kProduct,
  kSum,
};

/// Elementwise baseline combination under the same key alignment as
/// fuse_weighted. Geometric average and product require nonnegative
/// scores.
ScoreSet fuse_baseline(FusionRule rule, const ScoreSet& scores_vis,
                       const ScoreSet& scores_ir);

const char* fusion_rule_name(FusionRule rule);

/// Measures (GAR at reference_far, d-prime) for one modality's scores.
ModalityQuality modality_quality(const ScoreSet& s, double reference_far);

}  // namespace xspec

#endif  // XSPEC_FUSION_HPP
