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

#ifndef FEMTOCACHE_PLACEMENT_UNCODED_H_
#define FEMTOCACHE_PLACEMENT_UNCODED_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "femtocache/popularity.h"
#include "femtocache/topology.h"

namespace femtocache {

// 30 MB requests.
inline constexpr double kDefaultFileBits = 30e6 * 8;

// Per-helper cache capacity in whole files (all files have the same size).
struct HelperSpecs {
  std::vector<int> capacity;

  static HelperSpecs Uniform(int n_helpers, int files_per_helper);
  // floor(capacity_bytes / file_bytes) files at every helper.
  static HelperSpecs FromBytes(int n_helpers, double capacity_bytes,
                               double file_bytes);

  int num_helpers() const { return static_cast<int>(capacity.size()); }
};

// cache[h] holds the ranks (1-based, ascending) stored whole at helper h.
struct UncodedPlacement {
  std::vector<std::vector<int>> cache;

  int num_helpers() const { return static_cast<int>(cache.size()); }
  bool Contains(int helper, int rank) const;
  friend bool operator==(const UncodedPlacement&,
                         const UncodedPlacement&) = default;
};

// Throws InvalidParameter unless `placement` has one sorted, duplicate-free
// rank list per helper within [1, m] and, when given, within capacity.
void ValidatePlacement(const UncodedPlacement& placement, int n_helpers, int m);
void ValidatePlacement(const UncodedPlacement& placement,
                       const HelperSpecs& specs, int m);

// Expected download time summed over users, one request per user:
//   sum_u sum_f pmf[f] * file_bits / best_rate(u, f)
// where best_rate is the fastest source holding f among the reachable helpers
// and the macro BS. Seconds.
double EvaluateDelay(const UncodedPlacement& placement,
                     const ConnectivityGraph& graph,
                     const PopularityModel& pop, double file_bits);

// Delay with every request served by the BS.
double BsOnlyDelay(const ConnectivityGraph& graph, const PopularityModel& pop,
                   double file_bits);

struct GreedyTrace {
  UncodedPlacement placement;
  // Marginal delay reduction of each accepted (file, helper) pair, in order.
  std::vector<double> gains;
};

// Lazy greedy over (file, helper) pairs under per-helper capacities: each
// step adds the pair with the largest strictly positive delay reduction,
// ties to the lower rank then the lower helper index.
GreedyTrace GreedyPlaceTraced(const ConnectivityGraph& graph,
                              const PopularityModel& pop,
                              const HelperSpecs& specs, double file_bits);
UncodedPlacement GreedyPlace(const ConnectivityGraph& graph,
                             const PopularityModel& pop,
                             const HelperSpecs& specs, double file_bits);

// Every helper stores ranks 1..capacity[h].
UncodedPlacement MostPopularPlace(const HelperSpecs& specs,
                                  const PopularityModel& pop);

inline constexpr double kBruteForceLimit = 1e6;

// Exhaustive optimum over all feasible placements, ties resolved to the
// lexicographically smallest per-helper rank lists. Throws InstanceTooLarge
// when the number of candidate placements exceeds kBruteForceLimit.
UncodedPlacement BruteForcePlace(const ConnectivityGraph& graph,
                                 const PopularityModel& pop,
                                 const HelperSpecs& specs, double file_bits);

// {"0": [ranks...], "1": [...], ...}
void WritePlacementJson(const UncodedPlacement& placement, std::ostream& out);

}  // namespace femtocache

#endif  // FEMTOCACHE_PLACEMENT_UNCODED_H_
