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

#include "xspec/fid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <string>

#include "text_util.hpp"
#include "xspec/errors.hpp"

namespace xspec {

namespace {

using Eigen::MatrixXd;

MatrixXd to_eigen(const std::vector<double>& a, std::size_t d) {
  MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          a[i * d + j];
    }
  }
  return m;
}

std::vector<double> from_eigen(const MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.rows() * m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
    }
  }
  return out;
}

/// Square root of a symmetric PSD Eigen matrix; tolerances are scaled
/// by the matrix magnitude so large covariances are not rejected for
/// ordinary rounding noise.
MatrixXd sqrtm_psd_eigen(const MatrixXd& a, const char* what) {
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    throw NumericDomainError(std::string(what) + ": matrix asymmetry " +
                             detail::fmt_double(asym) + " exceeds tolerance");
  }
  MatrixXd sym = (a + a.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericDomainError(std::string(what) + ": eigendecomposition failed");
  }
  Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() < -1e-8 * scale) {
    throw NumericDomainError(std::string(what) + ": eigenvalue " +
                             detail::fmt_double(evals.minCoeff()) +
                             " is negative beyond tolerance");
  }
  Eigen::VectorXd roots = evals.cwiseMax(0.0).cwiseSqrt();
  MatrixXd r = solver.eigenvectors() * roots.asDiagonal() *
               solver.eigenvectors().transpose();
  return (r + r.transpose()) / 2.0;
}

}  // namespace

void FeatureSet::validate() const {
  if (d < 1) throw ArgumentError("feature dimension must be >= 1");
  if (n < 2) {
    throw DegenerateInputError("feature set needs >= 2 samples, has " +
                               std::to_string(n));
  }
  if (data.size() != n * d) {
    throw ShapeError("feature data length " + std::to_string(data.size()) +
                     " does not match " + std::to_string(n) + "x" +
                     std::to_string(d));
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw ArgumentError("feature set contains a non-finite entry");
    }
  }
}

GaussianStats gaussian_stats(const FeatureSet& f) {
  f.validate();
  GaussianStats stats;
  stats.d = f.d;
  stats.mu.assign(f.d, 0.0);
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.d; ++j) stats.mu[j] += f.at(i, j);
  }
  for (double& m : stats.mu) m /= static_cast<double>(f.n);

  stats.sigma.assign(f.d * f.d, 0.0);
  for (std::size_t i = 0; i < f.n; ++i) {
    for (std::size_t j = 0; j < f.d; ++j) {
      double dj = f.at(i, j) - stats.mu[j];
      for (std::size_t k = j; k < f.d; ++k) {
        stats.sigma[j * f.d + k] += dj * (f.at(i, k) - stats.mu[k]);
      }
    }
  }
  // Fill the lower triangle from the upper one: symmetric by
  // construction, no rounding asymmetry possible.
  const double denom = static_cast<double>(f.n - 1);
  for (std::size_t j = 0; j < f.d; ++j) {
    for (std::size_t k = j; k < f.d; ++k) {
      double v = stats.sigma[j * f.d + k] / denom;
      stats.sigma[j * f.d + k] = v;
      stats.sigma[k * f.d + j] = v;
    }
  }
  return stats;
}

std::vector<double> sqrtm_psd(const std::vector<double>& a, std::size_t d) {
  if (d < 1 || a.size() != d * d) {
    throw ShapeError("sqrtm_psd expects a d*d matrix");
  }
  return from_eigen(sqrtm_psd_eigen(to_eigen(a, d), "sqrtm_psd"));
}

double fid(const FeatureSet& x, const FeatureSet& y) {
  x.validate();
  y.validate();
  if (x.d != y.d) {
    throw ShapeError("feature dimension mismatch: " + std::to_string(x.d) +
                     " vs " + std::to_string(y.d));
  }
  GaussianStats sx = gaussian_stats(x);
  GaussianStats sy = gaussian_stats(y);

  double mean_term = 0.0;
  for (std::size_t j = 0; j < x.d; ++j) {
    double diff = sx.mu[j] - sy.mu[j];
    mean_term += diff * diff;
  }

  MatrixXd mx = to_eigen(sx.sigma, x.d);
  MatrixXd my = to_eigen(sy.sigma, x.d);
  MatrixXd rx = sqrtm_psd_eigen(mx, "fid: sqrt of first covariance");
  MatrixXd inner = rx * my * rx;
  MatrixXd cross = sqrtm_psd_eigen(inner, "fid: sqrt of cross term");

  double value = mean_term + mx.trace() + my.trace() - 2.0 * cross.trace();
  if (value < 0.0) {
    if (value < -1e-6) {
      throw NumericDomainError("fid evaluated to " + detail::fmt_double(value) +
                               ", below the rounding clamp");
    }
    value = 0.0;
  }
  return value;
}

FeatureSet load_features(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open feature file: " + path.string());
  std::string line;
  if (!std::getline(is, line)) {
    throw ParseError("empty feature file: " + path.string());
  }
  auto header = detail::split_csv(detail::strip_cr(line));
  if (header.size() < 2 || header[0] != "sample_id") {
    throw ParseError("bad feature header at line 1 of " + path.string() +
                     " (expected sample_id,f0,...)");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j + 1] != "f" + std::to_string(j)) {
      throw ParseError("bad feature header column " + std::to_string(j + 2) +
                       " at line 1 of " + path.string() + " (expected f" +
                       std::to_string(j) + ")");
    }
  }
  FeatureSet f;
  f.d = d;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    auto stripped = detail::strip_cr(line);
    if (stripped.empty()) continue;
    auto fields = detail::split_csv(stripped);
    if (fields.size() != d + 1) {
      throw ParseError("expected " + std::to_string(d + 1) + " columns, got " +
                       std::to_string(fields.size()) + " at line " +
                       std::to_string(lineno) + " of " + path.string());
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = detail::parse_double(
          fields[j + 1],
          "at line " + std::to_string(lineno) + " of " + path.string());
      if (!std::isfinite(v)) {
        throw ParseError("non-finite feature at line " +
                         std::to_string(lineno) + " of " + path.string());
      }
      f.data.push_back(v);
    }
    ++f.n;
  }
  if (f.n < 2) {
    throw ParseError("feature file needs >= 2 samples: " + path.string());
  }
  return f;
}

}  // namespace xspec
