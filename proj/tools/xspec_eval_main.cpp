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

#include <map>
#include <string>

#include "CLI11.hpp"
#include "xspec/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Biometric evaluation and fusion toolkit"};
  app.require_subcommand(1);

  xspec::RunConfig cfg;
  const std::map<std::string, xspec::NormMethod> norm_map{
      {"minmax", xspec::NormMethod::kMinMax},
      {"zscore", xspec::NormMethod::kZScore},
      {"none", xspec::NormMethod::kNone}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "Output directory")
        ->capture_default_str();
  };
  auto add_metric_opts = [&](CLI::App* sub) {
    sub->add_option("--far-points", cfg.far_points,
                    "FAR levels for GAR reporting")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--normalize", cfg.normalization, "Score normalization")
        ->transform(CLI::CheckedTransformer(norm_map, CLI::ignore_case))
        ->default_str("none");
  };

  CLI::App* eval = app.add_subcommand("eval", "Metrics for one score set");
  eval->add_option("--scores", cfg.scores, "Score CSV")->required();
  add_metric_opts(eval);
  add_common(eval);

  CLI::App* fuse =
      app.add_subcommand("fuse", "Fuse two modalities under every rule");
  fuse->add_option("--scores-vis", cfg.scores_vis, "Visible score CSV")
      ->required();
  fuse->add_option("--scores-ir", cfg.scores_ir, "Infrared score CSV")
      ->required();
  fuse->add_option("--sawf-ref-far", cfg.sawf_reference_far,
                   "Reference FAR at which the self-adaptive weights read GAR")
      ->capture_default_str();
  add_metric_opts(fuse);
  add_common(fuse);

  CLI::App* fid = app.add_subcommand("fid", "Frechet distance of feature sets");
  fid->add_option("--features-x", cfg.features_x, "First feature CSV")
      ->required();
  fid->add_option("--features-y", cfg.features_y, "Second feature CSV")
      ->required();
  add_common(fid);

  CLI::App* losses =
      app.add_subcommand("losses", "Composite loss from tensor files");
  losses
      ->add_option("--tensors", cfg.tensors_dir,
                   "Directory holding v/i/g_v/f_i/fgv/gfi and "
                   "p_real_ir/p_fake_ir/p_real_vis/p_fake_vis .tnsr files "
                   "plus embeddings.csv")
      ->required();
  add_common(losses);

  CLI::App* netspec =
      app.add_subcommand("netspec", "Shapes, parameters, receptive field");
  netspec->add_option("--network", cfg.network,
                      "Builtin name: generator or discriminator");
  netspec->add_option("--network-json", cfg.network_json,
                      "NetworkSpec JSON file");
  netspec->add_option("--input-h", cfg.shape_h, "Input height")
      ->capture_default_str();
  netspec->add_option("--input-w", cfg.shape_w, "Input width")
      ->capture_default_str();
  netspec->add_flag("--empirical-rf", cfg.empirical_rf,
                    "Also measure the receptive field by perturbation");
  netspec->add_option("--rf-input-size", cfg.rf_input_size,
                      "Square input extent for the perturbation probe")
      ->capture_default_str();
  netspec->add_option("--seed", cfg.seed, "Random weight seed")
      ->capture_default_str();
  add_common(netspec);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic score set");
  synth->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  synth->add_option("--n-genuine", cfg.n_genuine, "Genuine trial count")
      ->capture_default_str();
  synth->add_option("--n-impostor", cfg.n_impostor, "Impostor trial count")
      ->capture_default_str();
  synth->add_option("--genuine-mean", cfg.genuine_mean, "Genuine score mean")
      ->capture_default_str();
  synth->add_option("--genuine-sd", cfg.genuine_sd, "Genuine score stddev")
      ->capture_default_str();
  synth->add_option("--impostor-mean", cfg.impostor_mean, "Impostor score mean")
      ->capture_default_str();
  synth->add_option("--impostor-sd", cfg.impostor_sd, "Impostor score stddev")
      ->capture_default_str();
  add_common(synth);

  CLI11_PARSE(app, argc, argv);

  cfg.subcommand = app.get_subcommands().front()->get_name();
  return xspec::run(cfg);
}
