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

#include "xspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "text_util.hpp"
#include "xspec/errors.hpp"

namespace xspec {

RocCurve roc_curve(const ScoreSet& s) {
  s.require_both_classes();
  std::vector<double> genuine = s.genuine_scores();
  std::vector<double> impostor = s.impostor_scores();
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + impostor.size());
  thresholds.insert(thresholds.end(), genuine.begin(), genuine.end());
  thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocCurve r;
  r.n_genuine = genuine.size();
  r.n_impostor = impostor.size();
  const double ng = static_cast<double>(genuine.size());
  const double ni = static_cast<double>(impostor.size());

  // Counts of scores >= t via lower_bound on the ascending-sorted lists.
  auto rate_at = [](const std::vector<double>& sorted, double t, double n) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(sorted.end() - it) / n;
  };

  r.path.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  for (double t : thresholds) {
    r.path.push_back({t, rate_at(impostor, t, ni), rate_at(genuine, t, ng)});
  }

  // Collapse equal-FAR runs to their best point. GAR is non-decreasing
  // along the path, so the best point of a run is its last one.
  for (std::size_t i = 0; i < r.path.size(); ++i) {
    if (i + 1 == r.path.size() || r.path[i + 1].far != r.path[i].far) {
      r.points.push_back(r.path[i]);
    }
  }
  return r;
}

double gar_at_far(const RocCurve& r, double far_level) {
  if (!(far_level > 0.0 && far_level <= 1.0)) {
    throw ArgumentError("far level must lie in (0,1], got " +
                        detail::fmt_double(far_level));
  }
  const auto& pts = r.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].far >= far_level) {
      if (pts[i].far == far_level) return pts[i].gar;
      const auto& a = pts[i - 1];
      const auto& b = pts[i];
      double frac = (far_level - a.far) / (b.far - a.far);
      return a.gar + frac * (b.gar - a.gar);
    }
  }
  return 1.0;  // unreachable: the far=1 sentinel always matches
}

double eer(const RocCurve& r) {
  const auto& path = r.path;
  // h = FAR - FRR; starts at -1 (threshold +inf) and ends at +1.
  auto h = [](const RocPoint& p) { return p.far + p.gar - 1.0; };
  for (std::size_t i = 1; i < path.size(); ++i) {
    double h1 = h(path[i]);
    if (h1 < 0.0) continue;
    if (h1 == 0.0) return path[i].far;
    double h0 = h(path[i - 1]);
    double frac = h0 / (h0 - h1);  // h0 < 0 <= h1 here
    return path[i - 1].far + frac * (path[i].far - path[i - 1].far);
  }
  return 1.0;  // unreachable: h(last point) == +1
}

double d_prime(const ScoreSet& s) {
  std::vector<double> genuine = s.genuine_scores();
  std::vector<double> impostor = s.impostor_scores();
  if (genuine.size() < 2 || impostor.size() < 2) {
    throw DegenerateInputError("d-prime needs >= 2 scores in each class");
  }
  auto mean_var = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::pair<double, double>{mean, var};
  };
  auto [mg, vg] = mean_var(genuine);
  auto [mi, vi] = mean_var(impostor);
  double pooled = (vg + vi) / 2.0;
  if (pooled == 0.0) {
    if (mg == mi) return 0.0;
    throw DegenerateInputError(
        "d-prime is infinite: zero variance in both classes with distinct "
        "means");
  }
  return std::fabs(mg - mi) / std::sqrt(pooled);
}

double auc(const RocCurve& r) {
  double area = 0.0;
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    const auto& a = r.path[i - 1];
    const auto& b = r.path[i];
    area += (b.far - a.far) * (a.gar + b.gar) / 2.0;
  }
  return area;
}

BiometricReport make_report(const ScoreSet& s,
                            const std::vector<double>& far_levels) {
  RocCurve r = roc_curve(s);
  BiometricReport rep;
  for (double level : far_levels) {
    rep.gar_at_far.emplace_back(level, gar_at_far(r, level));
  }
  rep.eer = eer(r);
  rep.d_prime = d_prime(s);
  rep.auc = auc(r);
  rep.n_genuine = r.n_genuine;
  rep.n_impostor = r.n_impostor;
  return rep;
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& r) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << "threshold,far,gar\n";
  for (const auto& p : r.points) {
    os << detail::fmt_double(p.threshold) << ',' << detail::fmt_double(p.far)
       << ',' << detail::fmt_double(p.gar) << "\n";
  }
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace xspec
