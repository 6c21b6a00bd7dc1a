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

#ifndef XSPEC_LOSSES_HPP
#define XSPEC_LOSSES_HPP

#include <vector>

#include "xspec/tensor.hpp"

namespace xspec {

/// Mixing coefficients of the composite objective. The defaults are the
/// documented operating values; all must be nonnegative.
struct LossWeights {
  double lambda_cyc = 10.0;
  double lambda_syn = 30.0;
  double lambda_idr = 10.0;
};

/// Discriminator outputs for one batch: probabilities in [0,1], either
/// scalars (1-element tensors) or patch-probability maps. The four
/// tensors may have different shapes; each expectation is realized as
/// the mean over its own tensor's elements.
struct DiscriminatorProbe {
  Tensor p_real_ir;   // D_ir on a real infrared sample
  Tensor p_fake_ir;   // D_ir on a converted visible sample
  Tensor p_real_vis;  // D_vis on a real visible sample
  Tensor p_fake_vis;  // D_vis on a converted infrared sample
};

/// The six images of one bidirectional conversion: originals v and i,
/// one-step conversions g_v and f_i, and round-trip reconstructions
/// fgv (v -> g -> f) and gfi (i -> f -> g). All must share one shape.
struct ConversionBundle {
  Tensor v, i;
  Tensor g_v, f_i;
  Tensor fgv, gfi;

  void validate() const;
};

/// 128-dimensional identity embedding.
struct Embedding128 {
  std::vector<double> values;

  void validate() const;
};

/// The adversarial value function: mean of log p over each real-probe
/// tensor plus mean of log(1-p) over each fake-probe tensor, natural
/// logs, probabilities clamped to [1e-7, 1-1e-7] first. Sign and
/// min/max alternation are the training loop's concern, not ours.
double adversarial_loss(const DiscriminatorProbe& d);

/// l1_mean(fgv, v) + l1_mean(gfi, i).
double cycle_loss(const ConversionBundle& b);

/// l1_mean(f_i, fgv) + l1_mean(g_v, gfi).
double syn_loss(const ConversionBundle& b);

/// Euclidean distance between two 128-d identity embeddings.
double idr_loss(const Embedding128& e_vis, const Embedding128& e_ir);

/// adv + lambda_cyc*cyc + lambda_syn*syn + lambda_idr*idr. The three
/// non-adversarial terms must be nonnegative.
double composite_loss(double adv, double cyc, double syn, double idr,
                      const LossWeights& w = LossWeights{});

}  // namespace xspec

#endif  // XSPEC_LOSSES_HPP
