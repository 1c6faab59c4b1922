// Copyright 2026 The Authors.
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

// Command-line driver: `femtocache run <experiment> [flags]`.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "femtocache/error.h"
#include "femtocache/experiment.h"

namespace {

using femtocache::ExperimentConfig;

// Registers a flag that writes into an optional config field when given.
template <typename T>
void Flag(CLI::App* app, const std::string& name, std::optional<T>& field,
          const std::string& help) {
  CLI::Option* opt = app->add_option_function<T>(
      name, [&field](const T& v) { field = v; }, help);
  // Lists accept both `--x 1 2 3` and `--x 1,2,3`.
  if constexpr (CLI::detail::is_mutable_container<T>::value) opt->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Femtocaching and D2D caching experiments"};
  app.set_version_flag("--version", femtocache::Version());
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  std::string experiment;
  std::string config_path;
  bool dump_config = false;
  ExperimentConfig flags;

  std::string kinds;
  for (const auto& name : femtocache::ExperimentNames()) {
    kinds += (kinds.empty() ? "" : " | ") + name;
  }
  run->add_option("experiment", experiment, kinds)->required();
  run->add_option("--config", config_path, "JSON config; flags override it");
  run->add_flag("--dump-config", dump_config,
                "Print the resolved config as JSON and exit");
  Flag(run, "--n", flags.n, "Users");
  Flag(run, "--m", flags.m, "Catalog size");
  Flag(run, "--gamma", flags.gamma, "Request Zipf exponent");
  Flag(run, "--gamma1", flags.gamma1, "Random-caching Zipf exponent");
  Flag(run, "--M", flags.cache_files, "Files cached per device (D2D)");
  Flag(run, "--r", flags.r, "Collaboration distance");
  Flag(run, "--r-values", flags.r_values, "Collaboration distances to sweep");
  Flag(run, "--gamma1-values", flags.gamma1_values, "gamma1 values to sweep");
  Flag(run, "--strategy", flags.strategy, "deterministic | random");
  Flag(run, "--mode", flags.mode, "auto | analytic | mc | both");
  Flag(run, "--helpers", flags.helpers, "Helpers in the cell");
  Flag(run, "--helper-counts", flags.helper_counts, "Helper counts to sweep");
  Flag(run, "--capacity", flags.capacity, "Helper capacity in files");
  Flag(run, "--capacities", flags.capacities, "Capacities to sweep");
  Flag(run, "--policy", flags.policy,
       "Comma-separated: greedy, most-popular, coded, brute-force (place)");
  Flag(run, "--helper-mode", flags.helper_mode, "uniform | grid");
  Flag(run, "--helper-radius", flags.helper_radius, "Helper coverage radius (m)");
  Flag(run, "--file-bits", flags.file_bits, "File size in bits");
  Flag(run, "--qos", flags.qos, "Download deadline (s)");
  Flag(run, "--cell-radius", flags.cell_radius, "Macro cell radius (m)");
  Flag(run, "--coded-groups", flags.coded_groups,
       "Popularity groups for the coded LP (0 = per file)");
  Flag(run, "--n-values", flags.n_values, "User counts for scaling-check");
  Flag(run, "--catalog-scale", flags.catalog_scale,
       "Catalog size per ln(n) for scaling-check");
  Flag(run, "--r-selection", flags.r_selection, "optimize | proportional");
  Flag(run, "--reps", flags.reps, "Monte Carlo replications");
  Flag(run, "--seed", flags.seed, "Root seed");
  Flag(run, "--trace", flags.trace, "Request trace CSV (file_id,count)");
  Flag(run, "--layout", flags.layout, "Layout JSON for place");
  Flag(run, "--layout-out", flags.layout_out, "Write the generated layout JSON");
  Flag(run, "--out", flags.out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig base;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot open config `" << config_path << "`\n";
        return 2;
      }
      std::stringstream text;
      text << in.rdbuf();
      base = femtocache::ConfigFromJson(text.str());
    }
    const auto kind = femtocache::ParseExperiment(experiment);
    if (!config_path.empty() && base.kind != kind) {
      std::cerr << "error: config is for `" << femtocache::ExperimentName(base.kind)
                << "`, not `" << experiment << "`\n";
      return 2;
    }
    flags.kind = kind;
    const ExperimentConfig config = femtocache::MergeConfig(base, flags);
    if (dump_config) {
      const auto resolved = femtocache::ResolveConfig(config);
      femtocache::ValidateConfig(resolved);
      std::cout << femtocache::ConfigToJson(resolved);
      return 0;
    }
    return femtocache::Run(config, std::cout, std::cerr);
  } catch (const femtocache::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
