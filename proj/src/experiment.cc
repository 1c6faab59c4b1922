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

#include "femtocache/experiment.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "femtocache/d2d_sim.h"
#include "femtocache/error.h"
#include "femtocache/macro_sim.h"
#include "femtocache/placement_coded.h"
#include "femtocache/placement_uncoded.h"
#include "femtocache/popularity.h"
#include "femtocache/topology.h"
#include "json.hpp"

#ifndef FEMTOCACHE_VERSION
#define FEMTOCACHE_VERSION "dev"
#endif

namespace femtocache {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::kFit, "fit"},
    {ExperimentKind::kPlace, "place"},
    {ExperimentKind::kSimulateMacro, "simulate-macro"},
    {ExperimentKind::kSimulateD2D, "simulate-d2d"},
    {ExperimentKind::kSweepHelpers, "sweep-helpers"},
    {ExperimentKind::kSweepCapacity, "sweep-capacity"},
    {ExperimentKind::kSweepR, "sweep-r"},
    {ExperimentKind::kSweepGamma1, "sweep-gamma1"},
    {ExperimentKind::kScalingCheck, "scaling-check"},
};

bool IsMacro(ExperimentKind k) {
  return k == ExperimentKind::kPlace || k == ExperimentKind::kSimulateMacro ||
         k == ExperimentKind::kSweepHelpers || k == ExperimentKind::kSweepCapacity;
}

bool IsD2D(ExperimentKind k) {
  return k == ExperimentKind::kSimulateD2D || k == ExperimentKind::kSweepR ||
         k == ExperimentKind::kSweepGamma1 || k == ExperimentKind::kScalingCheck;
}

}  // namespace

std::string ExperimentName(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ExperimentKind ParseExperiment(const std::string& name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  throw InvalidParameter("unknown experiment `" + name + "`");
}

std::vector<std::string> ExperimentNames() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.push_back(k.name);
  return out;
}

std::string Version() { return FEMTOCACHE_VERSION; }

// ---------------------------------------------------------------------------
// JSON round trip.

namespace {

// Applies `fn(key, field)` to every optional field in a fixed order.
template <typename Config, typename Fn>
void ForEachField(Config& c, Fn&& fn) {
  fn("n", c.n);
  fn("m", c.m);
  fn("gamma", c.gamma);
  fn("gamma1", c.gamma1);
  fn("M", c.cache_files);
  fn("r", c.r);
  fn("r_values", c.r_values);
  fn("gamma1_values", c.gamma1_values);
  fn("strategy", c.strategy);
  fn("mode", c.mode);
  fn("helpers", c.helpers);
  fn("helper_counts", c.helper_counts);
  fn("capacity", c.capacity);
  fn("capacities", c.capacities);
  fn("policy", c.policy);
  fn("helper_mode", c.helper_mode);
  fn("helper_radius", c.helper_radius);
  fn("file_bits", c.file_bits);
  fn("qos", c.qos);
  fn("cell_radius", c.cell_radius);
  fn("coded_groups", c.coded_groups);
  fn("n_values", c.n_values);
  fn("catalog_scale", c.catalog_scale);
  fn("r_selection", c.r_selection);
  fn("reps", c.reps);
  fn("seed", c.seed);
  fn("trace", c.trace);
  fn("layout", c.layout);
  fn("layout_out", c.layout_out);
  fn("out", c.out);
}

ordered_json ConfigJson(const ExperimentConfig& config) {
  ordered_json j;
  j["experiment"] = ExperimentName(config.kind);
  ForEachField(config, [&](const char* key, const auto& field) {
    if (field) j[key] = *field;
  });
  return j;
}

}  // namespace

std::string ConfigToJson(const ExperimentConfig& config) {
  return ConfigJson(config).dump(2) + "\n";
}

ExperimentConfig ConfigFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
  ExperimentConfig config;
  if (!j.contains("experiment") || !j["experiment"].is_string()) {
    throw InvalidParameter("config field `experiment` (string) is required");
  }
  config.kind = ParseExperiment(j["experiment"].get<std::string>());
  std::size_t known = 1;
  ForEachField(config, [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    ++known;
    using T = typename std::decay_t<decltype(field)>::value_type;
    try {
      field = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw InvalidParameter(fmt::format("config field `{}`: {}", key, e.what()));
    }
  });
  if (known != j.size()) {
    for (const auto& item : j.items()) {
      bool found = item.key() == "experiment";
      ForEachField(config, [&](const char* key, auto&) {
        found = found || item.key() == key;
      });
      if (!found) {
        throw InvalidParameter("unknown config field `" + item.key() + "`");
      }
    }
  }
  return config;
}

ExperimentConfig MergeConfig(const ExperimentConfig& base,
                             const ExperimentConfig& overrides) {
  ExperimentConfig out = base;
  out.kind = overrides.kind;
  auto* dst = &out;
  ForEachField(overrides, [&](const char* key, const auto& field) {
    if (!field) return;
    ForEachField(*dst, [&](const char* k2, auto& target) {
      if (std::string_view(key) == k2) {
        if constexpr (std::is_same_v<std::decay_t<decltype(target)>,
                                     std::decay_t<decltype(field)>>) {
          target = field;
        }
      }
    });
  });
  return out;
}

// ---------------------------------------------------------------------------
// Defaults.

namespace {

// Users per cell in the macro experiments; chosen so a BS-only cell serves a
// handful of users within the QoS deadline.
constexpr int kMacroUsers = 20;

template <typename T>
void Default(std::optional<T>& field, T value) {
  if (!field) field = std::move(value);
}

}  // namespace

ExperimentConfig ResolveConfig(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  const ExperimentKind k = c.kind;
  Default(c.reps, IsMacro(k) ? 100 : (k == ExperimentKind::kScalingCheck ? 2000 : 1000));
  Default(c.seed, std::uint64_t{1});
  if (IsMacro(k)) {
    Default(c.n, kMacroUsers);
    Default(c.m, 10000);
    Default(c.gamma, 0.8);
    Default(c.helpers, k == ExperimentKind::kSweepCapacity ? 32 : 10);
    Default(c.helper_counts, std::vector<int>{0, 4, 8, 12, 16, 20, 24, 28, 32});
    Default(c.capacity, 2000);
    Default(c.capacities, std::vector<int>{0, 250, 500, 1000, 2000, 4000});
    Default(c.policy, std::string(k == ExperimentKind::kSweepHelpers
                                      ? "greedy,most-popular"
                                  : k == ExperimentKind::kSweepCapacity
                                      ? "greedy,coded"
                                      : "greedy"));
    Default(c.helper_mode, std::string("uniform"));
    Default(c.helper_radius, LinkRateModel::HelperDefaults().helper_radius_m);
    Default(c.file_bits, kDefaultFileBits);
    Default(c.qos, 200.0);
    Default(c.cell_radius, 400.0);
    Default(c.coded_groups, 50);
  }
  if (IsD2D(k)) {
    const bool scaling = k == ExperimentKind::kScalingCheck;
    Default(c.n, 500);
    Default(c.m, 1000);
    Default(c.gamma, scaling ? 1.5 : 0.6);
    Default(c.gamma1, 0.6);
    Default(c.cache_files, 1);
    Default(c.r, 0.1);
    Default(c.r_values,
            k == ExperimentKind::kSweepGamma1
                ? std::vector<double>{0.2, 0.1, 0.05}
                : std::vector<double>{1.0, 0.5, 0.25, 0.2, 0.1, 0.05, 0.04, 0.02});
    Default(c.gamma1_values,
            std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0});
    Default(c.strategy, std::string(k == ExperimentKind::kSweepGamma1
                                        ? "random"
                                        : "deterministic"));
    Default(c.mode, std::string("auto"));
    Default(c.n_values, std::vector<int>{250, 500, 1000, 2000});
    Default(c.catalog_scale, 100.0);
    Default(c.r_selection, std::string("optimize"));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Validation.

namespace {

[[noreturn]] void FieldError(const char* field, const std::string& what) {
  throw InvalidParameter(fmt::format("config field `{}`: {}", field, what));
}

CachingStrategy ParseStrategy(const std::string& s) {
  if (s == "deterministic") return CachingStrategy::kDeterministic;
  if (s == "random") return CachingStrategy::kRandomZipf;
  FieldError("strategy", "expected deterministic | random, got `" + s + "`");
}

EvalMode ParseMode(const std::string& s) {
  if (s == "auto") return EvalMode::kAuto;
  if (s == "analytic") return EvalMode::kAnalytic;
  if (s == "mc") return EvalMode::kMonteCarlo;
  if (s == "both") return EvalMode::kBoth;
  FieldError("mode", "expected auto | analytic | mc | both, got `" + s + "`");
}

HelperPlacement ParseHelperMode(const std::string& s) {
  if (s == "uniform") return HelperPlacement::kUniform;
  if (s == "grid") return HelperPlacement::kGrid;
  FieldError("helper_mode", "expected uniform | grid, got `" + s + "`");
}

std::vector<std::string> SplitPolicies(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void CheckR(const char* field, double r, bool exact) {
  if (!(r > 0.0 && r <= 1.0)) FieldError(field, fmt::format("r={} not in (0, 1]", r));
  if (exact) {
    try {
      ClustersPerSide(r, /*exact=*/true);
    } catch (const InvalidParameter& e) {
      FieldError(field, e.what());
    }
  }
}

}  // namespace

void ValidateConfig(const ExperimentConfig& c) {
  const ExperimentKind k = c.kind;
  if (c.reps && *c.reps < 1) FieldError("reps", "must be >= 1");
  if (k == ExperimentKind::kFit) {
    if (!c.trace) FieldError("trace", "fit needs a trace file");
    return;
  }
  if (c.n && *c.n < (IsMacro(k) ? 0 : 1)) FieldError("n", "must be positive");
  if (c.m && (*c.m < 1 || *c.m > kMaxCatalogSize)) {
    FieldError("m", fmt::format("must be in [1, {}]", kMaxCatalogSize));
  }
  if (c.gamma && (!std::isfinite(*c.gamma) || *c.gamma < 0.0)) {
    FieldError("gamma", "must be finite and >= 0");
  }
  if (IsMacro(k)) {
    if (*c.helpers < 0) FieldError("helpers", "must be >= 0");
    for (int h : *c.helper_counts) {
      if (h < 0) FieldError("helper_counts", "entries must be >= 0");
    }
    if (*c.capacity < 0) FieldError("capacity", "must be >= 0");
    for (int v : *c.capacities) {
      if (v < 0) FieldError("capacities", "entries must be >= 0");
    }
    const auto policies = SplitPolicies(*c.policy);
    if (policies.empty()) FieldError("policy", "no policy given");
    for (const auto& p : policies) {
      if (k == ExperimentKind::kPlace && p == "brute-force") continue;
      try {
        ParsePolicy(p);
      } catch (const InvalidParameter& e) {
        FieldError("policy", e.what());
      }
    }
    ParseHelperMode(*c.helper_mode);
    if (!(*c.helper_radius > 0.0)) FieldError("helper_radius", "must be > 0");
    if (!(*c.file_bits > 0.0)) FieldError("file_bits", "must be > 0");
    if (!(*c.qos > 0.0)) FieldError("qos", "must be > 0");
    if (!(*c.cell_radius > 0.0)) FieldError("cell_radius", "must be > 0");
    if (*c.coded_groups < 0 || *c.coded_groups > *c.m) {
      FieldError("coded_groups", "must be in [0, m]");
    }
  }
  if (IsD2D(k)) {
    const auto strategy = ParseStrategy(*c.strategy);
    const auto mode = ParseMode(*c.mode);
    const bool need_exact = strategy == CachingStrategy::kDeterministic &&
                            mode == EvalMode::kAnalytic &&
                            k != ExperimentKind::kScalingCheck;
    if (*c.cache_files < 0 || *c.cache_files > *c.m) {
      FieldError("M", fmt::format("must be in [0, m={}]", *c.m));
    }
    if (!std::isfinite(*c.gamma1) || *c.gamma1 < 0.0) {
      FieldError("gamma1", "must be finite and >= 0");
    }
    if (k == ExperimentKind::kSimulateD2D) CheckR("r", *c.r, need_exact);
    if (k == ExperimentKind::kSweepR || k == ExperimentKind::kSweepGamma1) {
      if (c.r_values->empty()) FieldError("r_values", "must not be empty");
      for (double r : *c.r_values) CheckR("r_values", r, need_exact);
    }
    for (double g : *c.gamma1_values) {
      if (!std::isfinite(g) || g < 0.0) FieldError("gamma1_values", "entries must be >= 0");
    }
    for (int n : *c.n_values) {
      if (n < 1) FieldError("n_values", "entries must be >= 1");
    }
    if (!(*c.catalog_scale > 0.0)) FieldError("catalog_scale", "must be > 0");
    if (*c.r_selection != "optimize" && *c.r_selection != "proportional") {
      FieldError("r_selection", "expected optimize | proportional");
    }
  }
}

// ---------------------------------------------------------------------------
// Execution.

namespace {

RequestTrace LoadTrace(const std::string& path) {
  std::ifstream in(path);
  if (!in) FieldError("trace", "cannot open `" + path + "`");
  return ReadTraceCsv(in);
}

MacroScenario MacroFrom(const ExperimentConfig& raw, const ExperimentConfig& c) {
  MacroScenario s;
  s.workload.n_users = *c.n;
  s.workload.file_bits = *c.file_bits;
  s.workload.qos_threshold_s = *c.qos;
  s.cell_radius_m = *c.cell_radius;
  s.n_helpers = *c.helpers;
  s.helper_mode = ParseHelperMode(*c.helper_mode);
  s.capacity_files = *c.capacity;
  s.catalog_size = *c.m;
  s.gamma = *c.gamma;
  s.helper_link.helper_radius_m = *c.helper_radius;
  s.coded_groups = *c.coded_groups;
  if (c.trace) {
    const ZipfFit fit = FitZipf(LoadTrace(*c.trace));
    s.gamma = fit.gamma_hat;
    if (!raw.m) s.catalog_size = static_cast<int>(fit.m_hat);
  }
  ValidateScenario(s);
  return s;
}

D2DScenario D2DFrom(const ExperimentConfig& c) {
  D2DScenario s;
  s.n = *c.n;
  s.m = *c.m;
  s.cache_files = *c.cache_files;
  s.r = *c.r;
  s.gamma = *c.gamma;
  s.gamma1 = *c.gamma1;
  s.strategy = ParseStrategy(*c.strategy);
  return s;
}

std::string RunPlace(const ExperimentConfig& raw, const ExperimentConfig& c) {
  const MacroScenario s = MacroFrom(raw, c);
  CellLayout layout;
  if (c.layout) {
    std::ifstream in(*c.layout);
    if (!in) FieldError("layout", "cannot open `" + *c.layout + "`");
    layout = ReadLayoutJson(in);
  } else {
    layout = ScenarioLayout(s, *c.seed, 0);
  }
  if (c.layout_out) {
    std::ofstream out(*c.layout_out);
    if (!out) FieldError("layout_out", "cannot write `" + *c.layout_out + "`");
    WriteLayoutJson(layout, out);
  }
  const ConnectivityGraph graph =
      BuildConnectivity(layout, s.helper_link, s.macro_link);
  const PopularityModel pop = BuildZipf(s.gamma, s.catalog_size);
  const std::string policy = SplitPolicies(*c.policy).front();
  std::ostringstream out;
  if (policy == "brute-force") {
    WritePlacementJson(
        BruteForcePlace(graph, pop,
                        HelperSpecs::Uniform(graph.num_helpers(), s.capacity_files),
                        s.workload.file_bits),
        out);
    return out.str();
  }
  const Placement placement = PlaceFiles(ParsePolicy(policy), graph, pop, s);
  if (const auto* u = std::get_if<UncodedPlacement>(&placement)) {
    WritePlacementJson(*u, out);
  } else {
    WriteCodedPlacementCsv(std::get<CodedPlacement>(placement), out);
  }
  return out.str();
}

std::string RunMacro(const ExperimentConfig& raw, const ExperimentConfig& c) {
  const MacroScenario s = MacroFrom(raw, c);
  std::ostringstream out;
  bool header = true;
  for (const auto& name : SplitPolicies(*c.policy)) {
    const PlacementPolicy policy = ParsePolicy(name);
    std::vector<SweepPoint> points;
    switch (c.kind) {
      case ExperimentKind::kSimulateMacro:
        points = SweepHelperCount({s.n_helpers}, s, policy, *c.reps, *c.seed);
        break;
      case ExperimentKind::kSweepHelpers:
        points = SweepHelperCount(*c.helper_counts, s, policy, *c.reps, *c.seed);
        break;
      default:
        points = SweepCapacity(*c.capacities, s, policy, *c.reps, *c.seed);
        break;
    }
    WriteSweepCsv(points, out, header);
    header = false;
  }
  return out.str();
}

std::string RunD2D(const ExperimentConfig& c) {
  std::ostringstream out;
  const D2DScenario s = D2DFrom(c);
  switch (c.kind) {
    case ExperimentKind::kSimulateD2D:
      WriteD2DCsv(EvaluateScenario(s, ParseMode(*c.mode), *c.seed, *c.reps), out);
      break;
    case ExperimentKind::kSweepR:
      WriteD2DCsv(SweepR(s, *c.r_values, ParseMode(*c.mode), *c.seed, *c.reps), out);
      break;
    case ExperimentKind::kSweepGamma1:
      WriteD2DCsv(SweepGamma1(s, *c.gamma1_values, *c.r_values, *c.seed, *c.reps),
                  out);
      break;
    default: {
      ScalingConfig sc;
      sc.gamma = *c.gamma;
      sc.n_values = *c.n_values;
      sc.catalog_scale = *c.catalog_scale;
      sc.cache_files = *c.cache_files;
      sc.selection = *c.r_selection == "optimize" ? RSelection::kOptimize
                                                  : RSelection::kProportional;
      sc.reps = *c.reps;
      WriteScalingCsv(ScalingCheck(sc, *c.seed), sc.gamma, out);
      break;
    }
  }
  return out.str();
}

struct AxisLabels {
  const char* x;
  const char* y;
};

AxisLabels LabelsFor(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kSimulateMacro:
    case ExperimentKind::kSweepHelpers:
      return {"number of helpers", "mean satisfied users"};
    case ExperimentKind::kSweepCapacity:
      return {"helper cache capacity (files)", "mean satisfied users"};
    case ExperimentKind::kSimulateD2D:
    case ExperimentKind::kSweepR:
      return {"collaboration distance r", "mean active clusters"};
    case ExperimentKind::kSweepGamma1:
      return {"caching Zipf exponent gamma1", "mean active clusters"};
    case ExperimentKind::kScalingCheck:
      return {"users n", "mean active clusters / n"};
    default:
      return {"", ""};
  }
}

}  // namespace

std::string RunToString(const ExperimentConfig& config) {
  const ExperimentConfig c = ResolveConfig(config);
  ValidateConfig(c);
  switch (c.kind) {
    case ExperimentKind::kFit:
      return FormatFit(FitZipf(LoadTrace(*c.trace)));
    case ExperimentKind::kPlace:
      return RunPlace(config, c);
    case ExperimentKind::kSimulateMacro:
    case ExperimentKind::kSweepHelpers:
    case ExperimentKind::kSweepCapacity:
      return RunMacro(config, c);
    default:
      return RunD2D(c);
  }
}

int Run(const ExperimentConfig& config, std::ostream& stdout_stream,
        std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  std::string text;
  ExperimentConfig resolved;
  try {
    resolved = ResolveConfig(config);
    ValidateConfig(resolved);
    text = RunToString(config);
  } catch (const InvalidParameter& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  if (!config.out) {
    stdout_stream << text;
    return 0;
  }
  const std::string& path = *config.out;
  const std::string stem =
      path.size() > 4 && (path.ends_with(".csv") || path.ends_with(".txt") ||
                          path.ends_with(".json"))
          ? path.substr(0, path.rfind('.'))
          : path;
  std::vector<std::string> outputs{path};
  {
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      log << "error: cannot write `" << path << "`\n";
      return 1;
    }
    out << text;
  }
  const bool is_csv = config.kind != ExperimentKind::kFit &&
                      config.kind != ExperimentKind::kPlace;
  if (is_csv) {
    const AxisLabels labels = LabelsFor(config.kind);
    const std::string plot_path = stem + ".plot.csv";
    std::ofstream plot(plot_path, std::ios::binary);
    plot << "# x_label: " << labels.x << "\n# y_label: " << labels.y << '\n'
         << text;
    outputs.push_back(plot_path);
  }
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  ordered_json manifest;
  manifest["experiment"] = ExperimentName(config.kind);
  manifest["version"] = Version();
  manifest["seed"] = *resolved.seed;
  manifest["wall_time_s"] = wall;
  manifest["config"] = ConfigJson(resolved);
  manifest["outputs"] = outputs;
  std::ofstream(stem + ".manifest.json", std::ios::binary)
      << manifest.dump(2) << '\n';
  return 0;
}

}  // namespace femtocache
