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

#ifndef FEMTOCACHE_MACRO_SIM_H_
#define FEMTOCACHE_MACRO_SIM_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "femtocache/placement_coded.h"
#include "femtocache/placement_uncoded.h"
#include "femtocache/popularity.h"
#include "femtocache/rng.h"
#include "femtocache/topology.h"

namespace femtocache {

struct WorkloadSpec {
  int n_users = 20;
  double file_bits = kDefaultFileBits;
  double qos_threshold_s = 200.0;
};

enum class ServingSource {
  kHelper,  // entirely from helpers
  kBs,      // entirely from the macro BS
  kMixed,   // coded fractions from helpers, remainder from the BS
};

struct SimOutcome {
  std::vector<double> download_time;  // seconds, per user
  std::vector<ServingSource> source;
  int satisfied_count = 0;
  int bs_users = 0;  // users that needed the BS at all
  double helper_served_fraction = 0.0;
  double bs_served_fraction = 0.0;  // 1 - helper_served_fraction
};

using Placement = std::variant<UncodedPlacement, CodedPlacement>;

// Snapshot with one given request (1-based rank) per user. Requests
// available at reachable helpers are downloaded at the helper rate with no
// load penalty; everything else shares the BS equally, so a BS user waits
// remaining * file_bits * n_bs / bs_rate[u].
SimOutcome SimulateRequests(const ConnectivityGraph& graph,
                            const Placement& placement,
                            const std::vector<int>& requests,
                            const WorkloadSpec& workload);

// Draws one request per user from `pop`, then SimulateRequests.
SimOutcome SimulateSnapshot(const ConnectivityGraph& graph,
                            const Placement& placement,
                            const PopularityModel& pop,
                            const WorkloadSpec& workload, Rng& rng);

// Users whose download time is <= threshold.
int CountSatisfied(const SimOutcome& outcome, double threshold_s);

enum class PlacementPolicy { kGreedy, kMostPopular, kCoded };

std::string PolicyName(PlacementPolicy policy);
PlacementPolicy ParsePolicy(const std::string& name);

// Parameters of the macro cell + helpers experiments.
struct MacroScenario {
  WorkloadSpec workload;
  double cell_radius_m = 400.0;
  int n_helpers = 10;
  HelperPlacement helper_mode = HelperPlacement::kUniform;
  // 60 GB per helper in 30 MB files.
  int capacity_files = 2000;
  int catalog_size = 10000;
  double gamma = 0.8;
  LinkRateModel helper_link = LinkRateModel::HelperDefaults();
  LinkRateModel macro_link = LinkRateModel::MacroDefaults();
  // Coded policy solves the LP over this many popularity buckets (0 = one
  // bucket per file).
  int coded_groups = 0;
};

void ValidateScenario(const MacroScenario& scenario);

// Builds the placement for one policy on one graph.
Placement PlaceFiles(PlacementPolicy policy, const ConnectivityGraph& graph,
                     const PopularityModel& pop, const MacroScenario& scenario);

// Replication `rep` of a scenario: users and requests depend only on
// (seed, rep); helper positions on (seed, helper count, rep). Curves at
// different x or for different policies therefore share users and requests.
CellLayout ScenarioLayout(const MacroScenario& scenario, std::uint64_t seed,
                          int rep);
int RunReplication(const MacroScenario& scenario, PlacementPolicy policy,
                   const PopularityModel& pop, std::uint64_t seed, int rep);

struct SweepPoint {
  double x = 0.0;
  double mean_satisfied = 0.0;
  double stderr_satisfied = 0.0;
  PlacementPolicy policy = PlacementPolicy::kGreedy;
  std::uint64_t seed = 0;
};

std::vector<SweepPoint> SweepHelperCount(const std::vector<int>& counts,
                                         const MacroScenario& scenario,
                                         PlacementPolicy policy, int reps,
                                         std::uint64_t seed);

std::vector<SweepPoint> SweepCapacity(const std::vector<int>& capacities,
                                      const MacroScenario& scenario,
                                      PlacementPolicy policy, int reps,
                                      std::uint64_t seed);

// `x,mean_satisfied,stderr,policy,seed`
void WriteSweepCsv(const std::vector<SweepPoint>& points, std::ostream& out,
                   bool header = true);

}  // namespace femtocache

#endif  // FEMTOCACHE_MACRO_SIM_H_
