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

#include "xspec/losses.hpp"

#include <cmath>
#include <string>

#include "xspec/errors.hpp"

namespace xspec {

namespace {

constexpr double kLogClamp = 1e-7;

/// Mean of log(p) or log(1-p) over one probe tensor, clamped away from
/// the log singularities.
double mean_log(const Tensor& probe, bool complement, const char* name) {
  probe.validate();
  double sum = 0.0;
  for (double p : probe.data) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ArgumentError(std::string(name) +
                          " must hold probabilities in [0,1]");
    }
    double q = complement ? 1.0 - p : p;
    q = std::min(1.0 - kLogClamp, std::max(kLogClamp, q));
    sum += std::log(q);
  }
  return sum / static_cast<double>(probe.data.size());
}

}  // namespace

void ConversionBundle::validate() const {
  v.validate();
  const Tensor* all[] = {&i, &g_v, &f_i, &fgv, &gfi};
  for (const Tensor* t : all) {
    t->validate();
    if (t->dims != v.dims) {
      throw ShapeError("conversion bundle tensors must share one shape");
    }
  }
}

void Embedding128::validate() const {
  if (values.size() != 128) {
    throw ShapeError("embedding must have exactly 128 values, has " +
                     std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ArgumentError("embedding contains a non-finite value");
    }
  }
}

double adversarial_loss(const DiscriminatorProbe& d) {
  return mean_log(d.p_real_ir, false, "p_real_ir") +
         mean_log(d.p_fake_ir, true, "p_fake_ir") +
         mean_log(d.p_real_vis, false, "p_real_vis") +
         mean_log(d.p_fake_vis, true, "p_fake_vis");
}

double cycle_loss(const ConversionBundle& b) {
  b.validate();
  return l1_mean(b.fgv, b.v) + l1_mean(b.gfi, b.i);
}

double syn_loss(const ConversionBundle& b) {
  b.validate();
  return l1_mean(b.f_i, b.fgv) + l1_mean(b.g_v, b.gfi);
}

double idr_loss(const Embedding128& e_vis, const Embedding128& e_ir) {
  e_vis.validate();
  e_ir.validate();
  double sum = 0.0;
  for (std::size_t m = 0; m < 128; ++m) {
    double diff = e_vis.values[m] - e_ir.values[m];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double composite_loss(double adv, double cyc, double syn, double idr,
                      const LossWeights& w) {
  if (cyc < 0.0 || syn < 0.0 || idr < 0.0) {
    throw ArgumentError("cycle, synthesis, and identity terms must be >= 0");
  }
  if (w.lambda_cyc < 0.0 || w.lambda_syn < 0.0 || w.lambda_idr < 0.0) {
    throw ArgumentError("loss weights must be >= 0");
  }
  return adv + w.lambda_cyc * cyc + w.lambda_syn * syn + w.lambda_idr * idr;
}

}  // namespace xspec
