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

#ifndef XSPEC_TENSOR_HPP
#define XSPEC_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace xspec {

/// Dense row-major tensor of 64-bit floats. All extents must be >= 1 and
/// their product must equal data.size(); `validate()` enforces this.
struct Tensor {
  std::vector<std::size_t> dims;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<std::size_t> d, std::vector<double> values);

  /// Zero-filled tensor with the given extents.
  static Tensor zeros(std::vector<std::size_t> d);
  /// Constant-filled tensor with the given extents.
  static Tensor full(std::vector<std::size_t> d, double value);

  std::size_t numel() const { return data.size(); }
  std::size_t ndim() const { return dims.size(); }

  // Unchecked row-major accessors for the common 3-D and 4-D layouts.
  double& at3(std::size_t c, std::size_t y, std::size_t x) {
    return data[(c * dims[1] + y) * dims[2] + x];
  }
  double at3(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * dims[1] + y) * dims[2] + x];
  }
  double& at4(std::size_t a, std::size_t b, std::size_t y, std::size_t x) {
    return data[((a * dims[1] + b) * dims[2] + y) * dims[3] + x];
  }
  double at4(std::size_t a, std::size_t b, std::size_t y, std::size_t x) const {
    return data[((a * dims[1] + b) * dims[2] + y) * dims[3] + x];
  }

  bool operator==(const Tensor& other) const = default;

  /// Throws ShapeError if the extents/data invariants are violated.
  void validate() const;
};

enum class PadMode { kReflect, kZero };

/// Mean absolute difference over all elements. Both tensors must have
/// identical extents.
double l1_mean(const Tensor& a, const Tensor& b);

/// Euclidean distance sqrt(sum((a_i - b_i)^2)) over all elements.
double euclidean(const Tensor& a, const Tensor& b);

/// Pads both spatial dimensions of a [C,H,W] tensor by `amount` on each
/// side. Reflect mode mirrors without repeating the edge element and
/// requires amount < H and amount < W.
Tensor pad2d(const Tensor& x, std::size_t amount, PadMode mode);

/// Direct (non-FFT) 2-D cross-correlation of x[Cin,H,W] with
/// weights[Cout,Cin,k,k]. Output spatial extent is
/// floor((n + 2*padding - k)/stride) + 1 per dimension. Deliberately a
/// naive reference implementation; it exists to verify shapes and
/// receptive fields, not to be fast.
Tensor conv2d(const Tensor& x, const Tensor& weights, std::size_t stride,
              std::size_t padding, PadMode pad_mode);

/// Binary tensor file: magic "TNSR", u32-LE ndim, ndim u32-LE extents,
/// then row-major f64-LE values.
void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

}  // namespace xspec

#endif  // XSPEC_TENSOR_HPP
