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

#ifndef XSPEC_FID_HPP
#define XSPEC_FID_HPP

#include <cstddef>
#include <filesystem>
#include <vector>

namespace xspec {

/// n samples of a d-dimensional feature vector, row-major.
struct FeatureSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> data;

  double at(std::size_t row, std::size_t col) const {
    return data[row * d + col];
  }

  /// Throws on n < 2 (covariance needs two samples), d < 1, size
  /// mismatch, or non-finite entries.
  void validate() const;
};

/// Mean vector and sample covariance (n-1 denominator, explicitly
/// symmetrized) of a feature population.
struct GaussianStats {
  std::size_t d = 0;
  std::vector<double> mu;     // d entries
  std::vector<double> sigma;  // d*d entries, row-major
};

GaussianStats gaussian_stats(const FeatureSet& f);

/// Square root of a symmetric PSD matrix (row-major d*d) via
/// eigendecomposition, negative eigenvalues clamped to zero. Asymmetry
/// or an eigenvalue below -1e-8 (scaled by the matrix magnitude) is a
/// numeric-domain error.
std::vector<double> sqrtm_psd(const std::vector<double>& a, std::size_t d);

/// Frechet distance between the Gaussians fitted to the two feature
/// populations, computed in the symmetric form
///   |mu_x - mu_y|^2 + Tr(Sx) + Tr(Sy) - 2 Tr((Sx^1/2 Sy Sx^1/2)^1/2).
/// Small negative rounding residue (> -1e-6) is clamped to zero.
double fid(const FeatureSet& x, const FeatureSet& y);

/// Reads a Feature CSV: header `sample_id,f0,...,f{d-1}`, one sample
/// per row, d inferred from the header.
FeatureSet load_features(const std::filesystem::path& path);

}  // namespace xspec

#endif  // XSPEC_FID_HPP
