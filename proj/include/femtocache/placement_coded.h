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

#ifndef FEMTOCACHE_PLACEMENT_CODED_H_
#define FEMTOCACHE_PLACEMENT_CODED_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "femtocache/placement_uncoded.h"
#include "femtocache/popularity.h"
#include "femtocache/simplex.h"
#include "femtocache/topology.h"

namespace femtocache {

// rho[f][h]: fraction of file f's coded symbols held by helper h, f 0-based
// by rank (rho[0] is the most popular file).
struct CodedPlacement {
  std::vector<std::vector<double>> rho;

  int num_files() const { return static_cast<int>(rho.size()); }
  int num_helpers() const { return rho.empty() ? 0 : static_cast<int>(rho[0].size()); }
};

// Throws InvalidParameter unless 0 <= rho <= 1 and per-helper capacity holds
// (sum_f item_size[f] * rho[f][h] <= capacity[h] + 1e-9).
void ValidateCodedPlacement(const CodedPlacement& placement,
                            const HelperSpecs& specs,
                            const std::vector<int>& item_size = {});

// Whole-file placement as a 0/1 fraction matrix.
CodedPlacement ToCoded(const UncodedPlacement& placement, int m);

// Fractional placement LP.
//
// For a fixed rho, user u downloading file f takes a[u][f][h] <= rho[f][h]
// from each reachable helper with sum_h a <= 1 and the remainder from the BS.
// Fetching sequentially, the request takes
//   file_bits * (sum_h a/rate[u][h] + (1 - sum_h a)/bs_rate[u])
//     = file_bits/bs_rate[u] - file_bits * sum_h a[u][f][h] * w[u][h],
//   w[u][h] = 1/bs_rate[u] - 1/rate[u][h]   (>= 0 when the helper is faster).
// With w >= 0 the inner problem is a fractional knapsack, so maximizing the
// linear savings jointly over (rho, a) solves the placement exactly:
//   maximize   sum_u sum_f pmf[f] * file_bits * sum_h w[u][h] a[u][f][h]
//   subject to a[u][f][h] - rho[f][h] <= 0
//              sum_h a[u][f][h] <= 1          (users with >= 2 helpers)
//              sum_f size[f] rho[f][h] <= capacity[h]
//              rho[f][h] <= 1,  rho, a >= 0
// Objective coefficients carry the file_bits factor so the LP optimum is the
// delay saving in seconds. Edges slower than the BS are dropped.
struct LpInstance {
  struct AuxVar {
    int user;
    int file;
    int helper;
  };

  int num_files = 0;
  int num_helpers = 0;
  int num_users = 0;
  LpProblem problem;
  // rho variable of (f, h) is f * num_helpers + h.
  std::vector<AuxVar> aux;  // variable num_files * num_helpers + k
  std::vector<int> item_size;
  double file_bits = 0.0;
  double baseline_delay = 0.0;  // all requests from the BS
  int dropped_edges = 0;
  std::vector<std::string> warnings;

  int rho_var(int f, int h) const { return f * num_helpers + h; }
  int num_rho_vars() const { return num_files * num_helpers; }
  // Expected delay implied by an LP objective value.
  double DelayFromObjective(double objective) const {
    return baseline_delay - objective;
  }
};

// `item_size[f]` is the cache footprint of catalog entry f in files (1 for
// plain catalogs; the bucket size for grouped catalogs). Throws
// DegenerateInstance when there are no users.
LpInstance BuildLp(const ConnectivityGraph& graph, const PopularityModel& pop,
                   const HelperSpecs& specs, double file_bits,
                   std::vector<int> item_size = {});

struct CodedSolution {
  CodedPlacement placement;
  double objective = 0.0;  // delay saving, seconds
  long pivots = 0;
};

CodedSolution SolveLpTraced(const LpInstance& instance,
                            const SimplexOptions& options = {});
CodedPlacement SolveLp(const LpInstance& instance,
                       const SimplexOptions& options = {});

// Per request the user collects fractions from its helpers fastest first
// (only helpers at least as fast as the BS), the remainder from the BS.
double EvaluateCodedDelay(const CodedPlacement& placement,
                          const ConnectivityGraph& graph,
                          const PopularityModel& pop, double file_bits);

// Contiguous near-equal popularity buckets; earlier buckets take the
// remainder so sizes are non-increasing.
struct FileGrouping {
  PopularityModel grouped;
  std::vector<int> group_of_rank;  // 0-based rank -> group
  std::vector<int> group_size;
  std::vector<int> first_rank;     // 1-based first rank of each group
};

FileGrouping GroupFiles(const PopularityModel& pop, int group_count);

// Every file of a bucket receives the bucket's fraction.
CodedPlacement ExpandGroupedPlacement(const CodedPlacement& grouped,
                                      const FileGrouping& grouping);

// Builds, solves, and expands the grouped LP.
CodedPlacement SolveGroupedPlacement(const ConnectivityGraph& graph,
                                     const PopularityModel& pop,
                                     const HelperSpecs& specs, double file_bits,
                                     int group_count,
                                     const SimplexOptions& options = {});

// `file_rank,helper_id,rho` rows for every nonzero fraction.
void WriteCodedPlacementCsv(const CodedPlacement& placement, std::ostream& out);

}  // namespace femtocache

#endif  // FEMTOCACHE_PLACEMENT_CODED_H_
