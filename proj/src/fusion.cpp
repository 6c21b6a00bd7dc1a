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

#include "xspec/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "xspec/errors.hpp"
#include "xspec/metrics.hpp"

namespace xspec {

namespace {

void check_quality(const ModalityQuality& q, const char* which) {
  if (std::isnan(q.gar) || std::isnan(q.d_prime) || std::isinf(q.gar) ||
      std::isinf(q.d_prime)) {
    throw ArgumentError(std::string("non-finite quality inputs for ") + which);
  }
  if (q.gar < 0.0 || q.gar > 1.0) {
    throw ArgumentError(std::string("gar out of [0,1] for ") + which);
  }
}

/// Pairs each vis trial with the ir trial sharing its
/// (probe_id, gallery_id) key and applies `combine` to the two scores.
template <typename Combine>
ScoreSet fuse_aligned(const ScoreSet& vis, const ScoreSet& ir,
                      Combine&& combine) {
  if (vis.trials.size() != ir.trials.size()) {
    throw AlignmentError("trial count mismatch: " +
                         std::to_string(vis.trials.size()) + " vs " +
                         std::to_string(ir.trials.size()));
  }
  std::map<std::pair<std::string, std::string>, const ScoreTrial*> ir_by_key;
  for (const auto& t : ir.trials) {
    auto [it, inserted] =
        ir_by_key.emplace(std::make_pair(t.probe_id, t.gallery_id), &t);
    if (!inserted) {
      throw AlignmentError("duplicate trial key (" + t.probe_id + ", " +
                           t.gallery_id + ") in second score set");
    }
  }
  ScoreSet out;
  out.trials.reserve(vis.trials.size());
  for (const auto& tv : vis.trials) {
    auto it = ir_by_key.find({tv.probe_id, tv.gallery_id});
    if (it == ir_by_key.end()) {
      throw AlignmentError("trial key (" + tv.probe_id + ", " + tv.gallery_id +
                           ") has no match in second score set");
    }
    const ScoreTrial& ti = *it->second;
    if (tv.probe_subject != ti.probe_subject ||
        tv.gallery_subject != ti.gallery_subject) {
      throw AlignmentError("subject labels disagree for trial key (" +
                           tv.probe_id + ", " + tv.gallery_id + ")");
    }
    ScoreTrial fused = tv;
    fused.score = combine(tv.score, ti.score);
    out.trials.push_back(std::move(fused));
  }
  return out;
}

}  // namespace

FusionWeights sawf_weights(const ModalityQuality& q_vis,
                           const ModalityQuality& q_ir, double tie_epsilon) {
  check_quality(q_vis, "visible");
  check_quality(q_ir, "infrared");
  FusionWeights w;
  const double sum = q_vis.gar + q_ir.gar;
  if (q_vis.d_prime > q_ir.d_prime + tie_epsilon) {
    w.w1 = sum > 0.0 ? q_vis.gar / sum : 0.5;
    w.w2 = 1.0 - w.w1;
  } else if (q_ir.d_prime > q_vis.d_prime + tie_epsilon) {
    w.w2 = sum > 0.0 ? q_ir.gar / sum : 0.5;
    w.w1 = 1.0 - w.w2;
  } else {
    w.w1 = w.w2 = 0.5;
  }
  return w;
}

ScoreSet fuse_weighted(const FusionWeights& w, const ScoreSet& scores_vis,
                       const ScoreSet& scores_ir) {
  return fuse_aligned(scores_vis, scores_ir, [&w](double a, double b) {
    return w.w1 * a + w.w2 * b;
  });
}

ScoreSet fuse_baseline(FusionRule rule, const ScoreSet& scores_vis,
                       const ScoreSet& scores_ir) {
  if (rule == FusionRule::kGeometricAverage || rule == FusionRule::kProduct) {
    for (const auto* set : {&scores_vis, &scores_ir}) {
      for (const auto& t : set->trials) {
        if (t.score < 0.0) {
          throw ArgumentError(
              std::string(fusion_rule_name(rule)) +
              " fusion requires nonnegative scores, got trial (" + t.probe_id +
              ", " + t.gallery_id + ")");
        }
      }
    }
  }
  auto combine = [rule](double a, double b) {
    switch (rule) {
      case FusionRule::kMaximum: return std::max(a, b);
      case FusionRule::kMinimum: return std::min(a, b);
      case FusionRule::kArithmeticAverage: return (a + b) / 2.0;
      case FusionRule::kGeometricAverage: return std::sqrt(a * b);
      case FusionRule::kMedian: return (a + b) / 2.0;  // median of two values
      case FusionRule::kProduct: return a * b;
      case FusionRule::kSum: return a + b;
    }
    throw ArgumentError("unknown fusion rule");
  };
  return fuse_aligned(scores_vis, scores_ir, combine);
}

const char* fusion_rule_name(FusionRule rule) {
  switch (rule) {
    case FusionRule::kMaximum: return "maximum";
    case FusionRule::kMinimum: return "minimum";
    case FusionRule::kArithmeticAverage: return "arithmetic_average";
    case FusionRule::kGeometricAverage: return "geometric_average";
    case FusionRule::kMedian: return "median";
    case FusionRule::kProduct: return "product";
    case FusionRule::kSum: return "sum";
  }
  return "unknown";
}

ModalityQuality modality_quality(const ScoreSet& s, double reference_far) {
  RocCurve r = roc_curve(s);
  return {gar_at_far(r, reference_far), d_prime(s)};
}

}  // namespace xspec
