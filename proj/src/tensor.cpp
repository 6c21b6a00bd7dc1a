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

#include "xspec/tensor.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "xspec/errors.hpp"

namespace xspec {

namespace {

std::size_t checked_numel(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw ShapeError("tensor must have at least one dimension");
  std::size_t n = 1;
  for (std::size_t e : dims) {
    if (e == 0) throw ShapeError("tensor extents must be >= 1");
    if (n > SIZE_MAX / e) throw ShapeError("tensor extent product overflows");
    n *= e;
  }
  return n;
}

std::string dims_str(const std::vector<std::size_t>& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + ")";
}

void require_same_dims(const Tensor& a, const Tensor& b, const char* op) {
  if (a.dims != b.dims) {
    throw ShapeError(std::string(op) + ": dims " + dims_str(a.dims) +
                     " vs " + dims_str(b.dims));
  }
}

// Mirror an out-of-range index back into [0, n) without repeating the
// edge element. Only valid when the overshoot is < n, which pad2d's
// precondition guarantees.
std::size_t reflect_index(long long i, std::size_t n) {
  if (i < 0) i = -i;
  if (i >= static_cast<long long>(n)) i = 2 * (static_cast<long long>(n) - 1) - i;
  return static_cast<std::size_t>(i);
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> d, std::vector<double> values)
    : dims(std::move(d)), data(std::move(values)) {
  validate();
}

Tensor Tensor::zeros(std::vector<std::size_t> d) {
  std::size_t n = checked_numel(d);
  return Tensor(std::move(d), std::vector<double>(n, 0.0));
}

Tensor Tensor::full(std::vector<std::size_t> d, double value) {
  std::size_t n = checked_numel(d);
  return Tensor(std::move(d), std::vector<double>(n, value));
}

void Tensor::validate() const {
  if (checked_numel(dims) != data.size()) {
    throw ShapeError("tensor data length " + std::to_string(data.size()) +
                     " does not match extents " + dims_str(dims));
  }
}

double l1_mean(const Tensor& a, const Tensor& b) {
  require_same_dims(a, b, "l1_mean");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    sum += std::fabs(a.data[i] - b.data[i]);
  }
  return sum / static_cast<double>(a.data.size());
}

double euclidean(const Tensor& a, const Tensor& b) {
  require_same_dims(a, b, "euclidean");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Tensor pad2d(const Tensor& x, std::size_t amount, PadMode mode) {
  if (x.ndim() != 3) {
    throw ShapeError("pad2d expects a (C,H,W) tensor, got " + dims_str(x.dims));
  }
  if (amount == 0) return x;
  const std::size_t c = x.dims[0], h = x.dims[1], w = x.dims[2];
  if (mode == PadMode::kReflect && (amount >= h || amount >= w)) {
    throw ArgumentError("reflect padding " + std::to_string(amount) +
                        " too large for spatial extent " + std::to_string(h) +
                        "x" + std::to_string(w));
  }
  Tensor out = Tensor::zeros({c, h + 2 * amount, w + 2 * amount});
  const long long a = static_cast<long long>(amount);
  for (std::size_t ci = 0; ci < c; ++ci) {
    for (std::size_t yo = 0; yo < h + 2 * amount; ++yo) {
      long long ys = static_cast<long long>(yo) - a;
      bool y_in = ys >= 0 && ys < static_cast<long long>(h);
      if (mode == PadMode::kZero && !y_in) continue;
      std::size_t yi = mode == PadMode::kReflect
                           ? reflect_index(ys, h)
                           : static_cast<std::size_t>(ys);
      for (std::size_t xo = 0; xo < w + 2 * amount; ++xo) {
        long long xs = static_cast<long long>(xo) - a;
        bool x_in = xs >= 0 && xs < static_cast<long long>(w);
        if (mode == PadMode::kZero && !x_in) continue;
        std::size_t xi = mode == PadMode::kReflect
                             ? reflect_index(xs, w)
                             : static_cast<std::size_t>(xs);
        out.at3(ci, yo, xo) = x.at3(ci, yi, xi);
      }
    }
  }
  return out;
}

Tensor conv2d(const Tensor& x, const Tensor& weights, std::size_t stride,
              std::size_t padding, PadMode pad_mode) {
  if (x.ndim() != 3) {
    throw ShapeError("conv2d expects (Cin,H,W) input, got " + dims_str(x.dims));
  }
  if (weights.ndim() != 4 || weights.dims[2] != weights.dims[3]) {
    throw ShapeError("conv2d expects (Cout,Cin,k,k) weights, got " +
                     dims_str(weights.dims));
  }
  if (weights.dims[1] != x.dims[0]) {
    throw ShapeError("conv2d channel mismatch: input has " +
                     std::to_string(x.dims[0]) + ", weights expect " +
                     std::to_string(weights.dims[1]));
  }
  if (stride < 1) throw ShapeError("conv2d stride must be >= 1");
  const std::size_t cout = weights.dims[0], cin = weights.dims[1],
                    k = weights.dims[2];
  const std::size_t hp = x.dims[1] + 2 * padding, wp = x.dims[2] + 2 * padding;
  if (k > hp || k > wp) {
    throw ShapeError("conv2d kernel " + std::to_string(k) +
                     " exceeds padded extent " + std::to_string(hp) + "x" +
                     std::to_string(wp));
  }
  const Tensor padded = pad2d(x, padding, pad_mode);
  const std::size_t ho = (hp - k) / stride + 1, wo = (wp - k) / stride + 1;
  Tensor out = Tensor::zeros({cout, ho, wo});
  std::vector<double> acc(wo);
  for (std::size_t co = 0; co < cout; ++co) {
    for (std::size_t oy = 0; oy < ho; ++oy) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t ci = 0; ci < cin; ++ci) {
        for (std::size_t ky = 0; ky < k; ++ky) {
          const double* row = &padded.data[(ci * hp + oy * stride + ky) * wp];
          const double* wrow = &weights.data[((co * cin + ci) * k + ky) * k];
          for (std::size_t kx = 0; kx < k; ++kx) {
            const double wv = wrow[kx];
            const double* src = row + kx;
            for (std::size_t ox = 0; ox < wo; ++ox) {
              acc[ox] += wv * src[ox * stride];
            }
          }
        }
      }
      std::copy(acc.begin(), acc.end(), &out.data[(co * ho + oy) * wo]);
    }
  }
  return out;
}

namespace {

void put_u32le(std::ofstream& os, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

std::uint32_t get_u32le(std::ifstream& is, const std::string& what) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("tensor file truncated reading " + what);
  }
  return static_cast<std::uint32_t>(b[0]) |
         static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 |
         static_cast<std::uint32_t>(b[3]) << 24;
}

}  // namespace

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  t.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os.write("TNSR", 4);
  put_u32le(os, static_cast<std::uint32_t>(t.ndim()));
  for (std::size_t e : t.dims) {
    if (e > UINT32_MAX) throw ShapeError("tensor extent exceeds file format");
    put_u32le(os, static_cast<std::uint32_t>(e));
  }
  for (double v : t.data) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b, 8);
  }
  if (!os) throw IoError("write failed: " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "TNSR", 4) != 0) {
    throw ParseError("not a tensor file (bad magic): " + path.string());
  }
  std::uint32_t ndim = get_u32le(is, "ndim");
  if (ndim == 0 || ndim > 32) {
    throw ParseError("tensor file has unreasonable ndim " +
                     std::to_string(ndim) + ": " + path.string());
  }
  std::vector<std::size_t> dims(ndim);
  for (auto& e : dims) {
    e = get_u32le(is, "extent");
    if (e == 0) throw ParseError("tensor file has zero extent: " + path.string());
  }
  std::size_t n = checked_numel(dims);
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) {
      throw ParseError("tensor file truncated reading values: " + path.string());
    }
    std::uint64_t bits = 0;
    for (int j = 0; j < 8; ++j) bits |= static_cast<std::uint64_t>(b[j]) << (8 * j);
    data[i] = std::bit_cast<double>(bits);
  }
  return Tensor(std::move(dims), std::move(data));
}

}  // namespace xspec
