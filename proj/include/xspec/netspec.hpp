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

#ifndef XSPEC_NETSPEC_HPP
#define XSPEC_NETSPEC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "xspec/tensor.hpp"

namespace xspec {

enum class LayerKind { kConv, kTransposedConv, kResidualBlock };

enum class Activation { kReLU, kLeakyReLU, kNone };

enum class NormKind { kInstance, kNone };

/// One layer of a declarative network description. A residual block
/// stands for two kernel x kernel stride-1 convolutions with an
/// identity skip, so it requires in_ch == out_ch. For transposed
/// convolutions `stride` is the integer upsampling factor.
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  PadMode pad_mode = PadMode::kZero;
  std::size_t in_ch = 1;
  std::size_t out_ch = 1;
  Activation activation = Activation::kReLU;
  double leaky_slope = 0.0;  // meaningful only for kLeakyReLU
  NormKind norm = NormKind::kNone;
};

struct NetworkSpec {
  std::string name;
  std::size_t input_channels = 1;
  std::vector<LayerSpec> layers;

  /// Throws ArgumentError on broken invariants (empty layer list,
  /// zero kernel/stride/channels, channel-chain mismatch, residual
  /// block changing channel count).
  void validate() const;
};

struct TensorShape {
  std::size_t channels = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  bool operator==(const TensorShape&) const = default;
};

/// The two built-in specs: "generator" (15 slots: a 7x7 reflect-padded
/// conv, two stride-2 3x3 convs, nine residual blocks, two stride-2
/// transposed convs, and a closing 7x7 reflect-padded conv) and
/// "discriminator" (five 4x4 convs, strides 2,2,2,1,1).
NetworkSpec builtin(const std::string& name);

/// Output shape after every layer. Convolutions follow
/// floor((n + 2p - k)/s) + 1; transposed convolutions follow
/// (n-1)s - 2p + k + (s-1), i.e. output padding fixed at s-1; residual
/// blocks preserve shape. Any layer whose output extent would drop
/// below 1 (or whose reflect padding is illegal for the incoming
/// extent) raises ShapeError naming the layer.
std::vector<TensorShape> infer_shapes(const NetworkSpec& net,
                                      TensorShape input);

/// Total learnable parameters: k*k*in*out weights + out biases per
/// conv-like layer (a residual block holds two), plus 2*channels per
/// instance normalization.
std::size_t param_count(const NetworkSpec& net);

/// Analytic receptive field of one output unit, by the recurrence
/// r += (k-1)*j, j *= s over layers in forward order. Residual blocks
/// contribute two stride-1 convolutions; transposed convolutions are
/// rejected (their field is not a plain accumulation).
std::size_t receptive_field(const NetworkSpec& net);

/// Perturbation oracle for the analytic value: instantiate strictly
/// positive random weights, run the all-conv network forward on a flat
/// baseline image, then re-run with single pixels along the central
/// input row bumped by 1, and report the diameter of the pixel span
/// that moves the center output unit. input_size must exceed the
/// analytic receptive field so the span fits inside the image.
std::size_t empirical_receptive_field(const NetworkSpec& net,
                                      std::uint64_t seed,
                                      std::size_t input_size);

/// JSON round-trip of a NetworkSpec. Activations encode their slope
/// inline: "relu", "none", or "leaky_relu(0.2)".
std::string network_to_json(const NetworkSpec& net);
NetworkSpec network_from_json(const std::string& text);

}  // namespace xspec

#endif  // XSPEC_NETSPEC_HPP
