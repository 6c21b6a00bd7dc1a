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

#ifndef XSPEC_SCORES_HPP
#define XSPEC_SCORES_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace xspec {

/// One probe-gallery comparison. Scores are similarities (higher means
/// more likely genuine) everywhere in the toolkit; distance-valued
/// matchers must convert via distance_to_similarity first.
struct ScoreTrial {
  std::string probe_id;
  std::string probe_subject;
  std::string gallery_id;
  std::string gallery_subject;
  double score = 0.0;

  bool genuine() const { return probe_subject == gallery_subject; }
};

struct ScoreSet {
  std::vector<ScoreTrial> trials;

  std::vector<double> genuine_scores() const;
  std::vector<double> impostor_scores() const;

  /// Throws DegenerateInputError unless the set holds at least one
  /// genuine and one impostor trial (required before any metric).
  void require_both_classes() const;
};

enum class NormMethod { kMinMax, kZScore, kNone };

/// Reads a Score CSV (header `probe_id,probe_subject,gallery_id,
/// gallery_subject,score`). Parse failures name the 1-based file line.
ScoreSet load_scores(const std::filesystem::path& path);

/// Writes the same CSV format load_scores reads, shortest round-trip
/// float formatting.
void write_scores(const std::filesystem::path& path, const ScoreSet& s);

/// Normalization statistics are pooled over ALL trials, genuine and
/// impostor together, since deployed systems do not know the labels.
/// minmax maps to [0,1]; zscore to mean 0 / sample stddev 1.
ScoreSet normalize(const ScoreSet& s, NormMethod method);

/// Maps each nonnegative distance d to the similarity 1/(1+d).
ScoreSet distance_to_similarity(const ScoreSet& s);

/// Deterministic synthetic score set: genuine scores from
/// Normal(genuine_mean, genuine_sd), impostor from
/// Normal(impostor_mean, impostor_sd), all clipped to [0,1]. The trial
/// keys depend only on the counts, so two sets generated with equal
/// counts align trial-for-trial under key-based fusion.
ScoreSet synth_scores(std::uint64_t seed, std::size_t n_genuine,
                      std::size_t n_impostor, double genuine_mean,
                      double genuine_sd, double impostor_mean,
                      double impostor_sd);

}  // namespace xspec

#endif  // XSPEC_SCORES_HPP
