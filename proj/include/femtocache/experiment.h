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

#ifndef FEMTOCACHE_EXPERIMENT_H_
#define FEMTOCACHE_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace femtocache {

enum class ExperimentKind {
  kFit,
  kPlace,
  kSimulateMacro,
  kSimulateD2D,
  kSweepHelpers,
  kSweepCapacity,
  kSweepR,
  kSweepGamma1,
  kScalingCheck,
};

std::string ExperimentName(ExperimentKind kind);
ExperimentKind ParseExperiment(const std::string& name);
std::vector<std::string> ExperimentNames();

// Experiment description. Unset fields take the experiment's default when
// resolved; serialization keeps only what was set, so parse -> serialize ->
// parse is the identity.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSweepR;

  // Users in the cell (macro) or in the unit square (D2D).
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> gamma;
  std::optional<double> gamma1;
  std::optional<int> cache_files;  // D2D per-device cache M
  std::optional<double> r;
  std::optional<std::vector<double>> r_values;
  std::optional<std::vector<double>> gamma1_values;
  std::optional<std::string> strategy;  // deterministic | random
  std::optional<std::string> mode;      // auto | analytic | mc | both

  std::optional<int> helpers;
  std::optional<std::vector<int>> helper_counts;
  std::optional<int> capacity;  // files per helper
  std::optional<std::vector<int>> capacities;
  // Comma-separated: greedy, most-popular, coded (place also takes
  // brute-force).
  std::optional<std::string> policy;
  std::optional<std::string> helper_mode;  // uniform | grid
  std::optional<double> helper_radius;
  std::optional<double> file_bits;
  std::optional<double> qos;
  std::optional<double> cell_radius;
  std::optional<int> coded_groups;

  std::optional<std::vector<int>> n_values;
  std::optional<double> catalog_scale;
  std::optional<std::string> r_selection;  // optimize | proportional

  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  // Request trace (`file_id,count` CSV). fit reads it; macro experiments fit
  // gamma from it when given.
  std::optional<std::string> trace;
  std::optional<std::string> layout;      // layout JSON to use for `place`
  std::optional<std::string> layout_out;  // write the generated layout
  std::optional<std::string> out;         // main output path; stdout if unset

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

std::string ConfigToJson(const ExperimentConfig& config);
// Throws InvalidParameter naming the offending field.
ExperimentConfig ConfigFromJson(const std::string& text);

// Fields of `overrides` that are set replace those of `base`.
ExperimentConfig MergeConfig(const ExperimentConfig& base,
                             const ExperimentConfig& overrides);

// Fills every unset field with the experiment default.
ExperimentConfig ResolveConfig(const ExperimentConfig& config);

// Checks every field against the preconditions of the module that consumes
// it. Throws InvalidParameter with a field-level message.
void ValidateConfig(const ExperimentConfig& resolved);

// Runs the experiment and returns the main output text (CSV, JSON or
// key=value lines, depending on the kind). Pure function of the config.
std::string RunToString(const ExperimentConfig& config);

// Full run: validates, executes, and writes `out` plus, for CSV outputs, a
// `.plot.csv` variant with axis labels and a `.manifest.json`. Without `out`
// the main output goes to `stdout_stream`. Diagnostics go to `log`. Returns
// a process exit status.
int Run(const ExperimentConfig& config, std::ostream& stdout_stream,
        std::ostream& log);

std::string Version();

}  // namespace femtocache

#endif  // FEMTOCACHE_EXPERIMENT_H_
