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

#include "xspec/netspec.hpp"

#include <cmath>
#include <random>

#include "json.hpp"
#include "text_util.hpp"
#include "xspec/errors.hpp"

namespace xspec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string layer_label(std::size_t index_zero_based) {
  return "layer " + std::to_string(index_zero_based + 1);
}

LayerSpec conv(std::size_t k, std::size_t s, std::size_t p, PadMode pm,
               std::size_t in, std::size_t out, Activation act, double slope,
               NormKind norm) {
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.kernel = k;
  l.stride = s;
  l.padding = p;
  l.pad_mode = pm;
  l.in_ch = in;
  l.out_ch = out;
  l.activation = act;
  l.leaky_slope = slope;
  l.norm = norm;
  return l;
}

/// Spatial extent of a plain convolution; throws naming the layer if
/// the kernel no longer fits or reflect padding is illegal.
std::size_t conv_extent(std::size_t n, const LayerSpec& l, std::size_t idx) {
  if (l.pad_mode == PadMode::kReflect && l.padding >= n) {
    throw ShapeError(layer_label(idx) + ": reflect padding " +
                     std::to_string(l.padding) + " needs extent > " +
                     std::to_string(l.padding) + ", have " + std::to_string(n));
  }
  std::size_t padded = n + 2 * l.padding;
  if (l.kernel > padded) {
    throw ShapeError(layer_label(idx) + ": kernel " + std::to_string(l.kernel) +
                     " exceeds padded extent " + std::to_string(padded));
  }
  return (padded - l.kernel) / l.stride + 1;
}

std::size_t transposed_extent(std::size_t n, const LayerSpec& l,
                              std::size_t idx) {
  // (n-1)*s - 2p + k + (s-1), evaluated in signed arithmetic so a
  // too-large padding is caught instead of wrapping.
  long long v = static_cast<long long>(n - 1) * static_cast<long long>(l.stride) -
                2 * static_cast<long long>(l.padding) +
                static_cast<long long>(l.kernel) +
                static_cast<long long>(l.stride) - 1;
  if (v < 1) {
    throw ShapeError(layer_label(idx) + ": transposed conv output extent " +
                     std::to_string(v) + " < 1");
  }
  return static_cast<std::size_t>(v);
}

std::size_t conv_like_params(std::size_t k, std::size_t in, std::size_t out,
                             NormKind norm) {
  std::size_t p = k * k * in * out + out;
  if (norm == NormKind::kInstance) p += 2 * out;
  return p;
}

const char* kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kTransposedConv: return "transposed_conv";
    case LayerKind::kResidualBlock: return "residual_block";
  }
  return "unknown";
}

std::string activation_name(Activation a, double slope) {
  switch (a) {
    case Activation::kReLU: return "relu";
    case Activation::kNone: return "none";
    case Activation::kLeakyReLU:
      return "leaky_relu(" + detail::fmt_double(slope) + ")";
  }
  return "unknown";
}

}  // namespace

void NetworkSpec::validate() const {
  if (layers.empty()) {
    throw ArgumentError("network spec '" + name + "' has no layers");
  }
  if (input_channels < 1) {
    throw ArgumentError("network spec '" + name + "' needs >= 1 input channel");
  }
  std::size_t prev = input_channels;
  for (std::size_t idx = 0; idx < layers.size(); ++idx) {
    const LayerSpec& l = layers[idx];
    if (l.kernel < 1 || l.stride < 1 || l.in_ch < 1 || l.out_ch < 1) {
      throw ArgumentError(layer_label(idx) +
                          ": kernel, stride, and channels must be >= 1");
    }
    if (l.in_ch != prev) {
      throw ArgumentError(layer_label(idx) + ": in_ch " +
                          std::to_string(l.in_ch) +
                          " does not match preceding channel count " +
                          std::to_string(prev));
    }
    if (l.kind == LayerKind::kResidualBlock && l.in_ch != l.out_ch) {
      throw ArgumentError(layer_label(idx) +
                          ": residual block requires in_ch == out_ch");
    }
    prev = l.out_ch;
  }
}

NetworkSpec builtin(const std::string& name) {
  NetworkSpec net;
  net.name = name;
  net.input_channels = 1;
  if (name == "generator") {
    auto in_relu = [](std::size_t k, std::size_t s, std::size_t p, PadMode pm,
                      std::size_t in, std::size_t out) {
      return conv(k, s, p, pm, in, out, Activation::kReLU, 0.0,
                  NormKind::kInstance);
    };
    net.layers.push_back(in_relu(7, 1, 3, PadMode::kReflect, 1, 64));
    net.layers.push_back(in_relu(3, 2, 1, PadMode::kZero, 64, 128));
    net.layers.push_back(in_relu(3, 2, 1, PadMode::kZero, 128, 256));
    for (int b = 0; b < 9; ++b) {
      LayerSpec r = in_relu(3, 1, 1, PadMode::kZero, 256, 256);
      r.kind = LayerKind::kResidualBlock;
      net.layers.push_back(r);
    }
    LayerSpec up1 = in_relu(3, 2, 1, PadMode::kZero, 256, 128);
    up1.kind = LayerKind::kTransposedConv;
    net.layers.push_back(up1);
    LayerSpec up2 = in_relu(3, 2, 1, PadMode::kZero, 128, 64);
    up2.kind = LayerKind::kTransposedConv;
    net.layers.push_back(up2);
    net.layers.push_back(in_relu(7, 1, 3, PadMode::kReflect, 64, 1));
  } else if (name == "discriminator") {
    auto lrelu = [](std::size_t k, std::size_t s, std::size_t in,
                    std::size_t out, NormKind norm) {
      return conv(k, s, 1, PadMode::kZero, in, out, Activation::kLeakyReLU,
                  0.2, norm);
    };
    net.layers.push_back(lrelu(4, 2, 1, 64, NormKind::kNone));
    net.layers.push_back(lrelu(4, 2, 64, 128, NormKind::kInstance));
    net.layers.push_back(lrelu(4, 2, 128, 256, NormKind::kInstance));
    net.layers.push_back(lrelu(4, 1, 256, 512, NormKind::kInstance));
    net.layers.push_back(conv(4, 1, 1, PadMode::kZero, 512, 1,
                              Activation::kNone, 0.0, NormKind::kNone));
  } else {
    throw ArgumentError("unknown builtin network '" + name + "'");
  }
  net.validate();
  return net;
}

std::vector<TensorShape> infer_shapes(const NetworkSpec& net,
                                      TensorShape input) {
  net.validate();
  if (input.channels != net.input_channels) {
    throw ShapeError("input has " + std::to_string(input.channels) +
                     " channels, network expects " +
                     std::to_string(net.input_channels));
  }
  if (input.h < 1 || input.w < 1) {
    throw ShapeError("input extents must be >= 1");
  }
  std::vector<TensorShape> shapes;
  TensorShape cur = input;
  for (std::size_t idx = 0; idx < net.layers.size(); ++idx) {
    const LayerSpec& l = net.layers[idx];
    switch (l.kind) {
      case LayerKind::kConv:
        cur = {l.out_ch, conv_extent(cur.h, l, idx), conv_extent(cur.w, l, idx)};
        break;
      case LayerKind::kTransposedConv:
        cur = {l.out_ch, transposed_extent(cur.h, l, idx),
               transposed_extent(cur.w, l, idx)};
        break;
      case LayerKind::kResidualBlock: {
        // Two stride-1 convolutions; the skip requires the shape to
        // survive both, which conv_extent verifies.
        LayerSpec sub = l;
        sub.kind = LayerKind::kConv;
        sub.stride = 1;
        std::size_t h = conv_extent(conv_extent(cur.h, sub, idx), sub, idx);
        std::size_t w = conv_extent(conv_extent(cur.w, sub, idx), sub, idx);
        if (h != cur.h || w != cur.w) {
          throw ShapeError(layer_label(idx) +
                           ": residual block does not preserve extents (" +
                           std::to_string(cur.h) + "x" + std::to_string(cur.w) +
                           " -> " + std::to_string(h) + "x" +
                           std::to_string(w) + ")");
        }
        cur = {l.out_ch, h, w};
        break;
      }
    }
    shapes.push_back(cur);
  }
  return shapes;
}

std::size_t param_count(const NetworkSpec& net) {
  net.validate();
  std::size_t total = 0;
  for (const LayerSpec& l : net.layers) {
    if (l.kind == LayerKind::kResidualBlock) {
      total += 2 * conv_like_params(l.kernel, l.in_ch, l.out_ch, l.norm);
    } else {
      total += conv_like_params(l.kernel, l.in_ch, l.out_ch, l.norm);
    }
  }
  return total;
}

std::size_t receptive_field(const NetworkSpec& net) {
  net.validate();
  std::size_t r = 1, jump = 1;
  for (std::size_t idx = 0; idx < net.layers.size(); ++idx) {
    const LayerSpec& l = net.layers[idx];
    switch (l.kind) {
      case LayerKind::kConv:
        r += (l.kernel - 1) * jump;
        jump *= l.stride;
        break;
      case LayerKind::kResidualBlock:
        r += 2 * (l.kernel - 1) * jump;  // two stride-1 convolutions
        break;
      case LayerKind::kTransposedConv:
        throw ArgumentError(layer_label(idx) +
                            ": receptive field is undefined over transposed "
                            "convolutions (unsupported layer)");
    }
  }
  return r;
}

std::size_t empirical_receptive_field(const NetworkSpec& net,
                                      std::uint64_t seed,
                                      std::size_t input_size) {
  net.validate();
  for (std::size_t idx = 0; idx < net.layers.size(); ++idx) {
    if (net.layers[idx].kind != LayerKind::kConv) {
      throw ArgumentError(layer_label(idx) +
                          ": empirical receptive field needs an all-conv "
                          "network");
    }
  }
  const std::size_t analytic = receptive_field(net);
  if (input_size <= analytic) {
    throw ArgumentError("input size " + std::to_string(input_size) +
                        " must exceed the analytic receptive field " +
                        std::to_string(analytic));
  }

  // Strictly positive weights, scaled so activations stay O(1) through
  // the stack: w in [0.5, 1.5) / (k^2 * in_ch).
  std::mt19937_64 rng(seed);
  std::vector<Tensor> weights;
  for (const LayerSpec& l : net.layers) {
    Tensor w = Tensor::zeros({l.out_ch, l.in_ch, l.kernel, l.kernel});
    const double scale =
        1.0 / (static_cast<double>(l.kernel * l.kernel) *
               static_cast<double>(l.in_ch));
    for (double& v : w.data) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = (0.5 + u) * scale;
    }
    weights.push_back(std::move(w));
  }

  auto forward = [&](const Tensor& input) {
    Tensor x = input;
    for (std::size_t idx = 0; idx < net.layers.size(); ++idx) {
      const LayerSpec& l = net.layers[idx];
      x = conv2d(x, weights[idx], l.stride, l.padding, l.pad_mode);
    }
    return x;
  };

  Tensor baseline =
      Tensor::full({net.input_channels, input_size, input_size}, 0.5);
  Tensor base_out = forward(baseline);
  const std::size_t cy = base_out.dims[1] / 2, cx = base_out.dims[2] / 2;
  const double base = base_out.at3(0, cy, cx);
  const double tol = 1e-9 * (1.0 + std::fabs(base));

  const std::size_t mid_row = input_size / 2;
  std::size_t lo = input_size, hi = 0;
  bool any = false;
  for (std::size_t x = 0; x < input_size; ++x) {
    Tensor probe = baseline;
    probe.at3(0, mid_row, x) += 1.0;
    Tensor out = forward(probe);
    if (std::fabs(out.at3(0, cy, cx) - base) > tol) {
      any = true;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!any) {
    throw NumericDomainError(
        "no input pixel on the central row influences the center output");
  }
  return hi - lo + 1;
}

std::string network_to_json(const NetworkSpec& net) {
  net.validate();
  ordered_json j;
  j["name"] = net.name;
  j["input_channels"] = net.input_channels;
  j["layers"] = ordered_json::array();
  for (const LayerSpec& l : net.layers) {
    ordered_json jl;
    jl["kind"] = kind_name(l.kind);
    jl["kernel"] = l.kernel;
    jl["stride"] = l.stride;
    jl["padding"] = l.padding;
    jl["pad_mode"] = l.pad_mode == PadMode::kReflect ? "reflect" : "zero";
    jl["in_ch"] = l.in_ch;
    jl["out_ch"] = l.out_ch;
    jl["activation"] = activation_name(l.activation, l.leaky_slope);
    jl["norm"] = l.norm == NormKind::kInstance ? "instance" : "none";
    j["layers"].push_back(std::move(jl));
  }
  return j.dump(2) + "\n";
}

NetworkSpec network_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("network json: ") + e.what());
  }
  NetworkSpec net;
  try {
    net.name = j.at("name").get<std::string>();
    net.input_channels = j.at("input_channels").get<std::size_t>();
    for (const auto& jl : j.at("layers")) {
      LayerSpec l;
      std::string kind = jl.at("kind").get<std::string>();
      if (kind == "conv") {
        l.kind = LayerKind::kConv;
      } else if (kind == "transposed_conv") {
        l.kind = LayerKind::kTransposedConv;
      } else if (kind == "residual_block") {
        l.kind = LayerKind::kResidualBlock;
      } else {
        throw ParseError("network json: unknown layer kind '" + kind + "'");
      }
      l.kernel = jl.at("kernel").get<std::size_t>();
      l.stride = jl.at("stride").get<std::size_t>();
      l.padding = jl.at("padding").get<std::size_t>();
      std::string pm = jl.at("pad_mode").get<std::string>();
      if (pm == "reflect") {
        l.pad_mode = PadMode::kReflect;
      } else if (pm == "zero") {
        l.pad_mode = PadMode::kZero;
      } else {
        throw ParseError("network json: unknown pad_mode '" + pm + "'");
      }
      l.in_ch = jl.at("in_ch").get<std::size_t>();
      l.out_ch = jl.at("out_ch").get<std::size_t>();
      std::string act = jl.at("activation").get<std::string>();
      if (act == "relu") {
        l.activation = Activation::kReLU;
      } else if (act == "none") {
        l.activation = Activation::kNone;
      } else if (act.starts_with("leaky_relu(") && act.ends_with(")")) {
        l.activation = Activation::kLeakyReLU;
        l.leaky_slope = detail::parse_double(
            std::string_view(act).substr(11, act.size() - 12),
            "in activation '" + act + "'");
      } else {
        throw ParseError("network json: unknown activation '" + act + "'");
      }
      std::string norm = jl.at("norm").get<std::string>();
      if (norm == "instance") {
        l.norm = NormKind::kInstance;
      } else if (norm == "none") {
        l.norm = NormKind::kNone;
      } else {
        throw ParseError("network json: unknown norm '" + norm + "'");
      }
      net.layers.push_back(std::move(l));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("network json: ") + e.what());
  }
  net.validate();
  return net;
}

}  // namespace xspec
