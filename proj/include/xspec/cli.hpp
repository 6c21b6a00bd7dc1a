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

#ifndef XSPEC_CLI_HPP
#define XSPEC_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xspec/scores.hpp"

namespace xspec {

/// Fully-resolved batch run description. The executable front end fills
/// this from argv; tests construct it directly.
struct RunConfig {
  std::string subcommand;  // eval | fuse | fid | losses | netspec | synth

  std::filesystem::path scores;      // eval
  std::filesystem::path scores_vis;  // fuse
  std::filesystem::path scores_ir;   // fuse
  std::filesystem::path features_x;  // fid
  std::filesystem::path features_y;  // fid
  std::filesystem::path tensors_dir;  // losses: fixed-name tensor files

  std::string network;                 // netspec builtin name
  std::filesystem::path network_json;  // netspec: spec file instead

  std::vector<double> far_points{1e-1, 1e-3};
  NormMethod normalization = NormMethod::kNone;
  double sawf_reference_far = 1e-3;
  std::uint64_t seed = 42;

  // synth parameters
  std::size_t n_genuine = 500;
  std::size_t n_impostor = 500;
  double genuine_mean = 0.7;
  double genuine_sd = 0.1;
  double impostor_mean = 0.4;
  double impostor_sd = 0.1;

  // netspec options
  std::size_t shape_h = 256;
  std::size_t shape_w = 256;
  bool empirical_rf = false;
  std::size_t rf_input_size = 96;

  std::filesystem::path out_dir = ".";
};

/// Executes one subcommand. Returns 0 when every requested output file
/// was written; on any failure prints one machine-parsable line to
/// standard error, removes the output files this run had already
/// written, and returns nonzero.
int run(const RunConfig& config);

}  // namespace xspec

#endif  // XSPEC_CLI_HPP
