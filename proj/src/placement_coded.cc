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

#include "femtocache/placement_coded.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "femtocache/error.h"

namespace femtocache {

void ValidateCodedPlacement(const CodedPlacement& placement,
                            const HelperSpecs& specs,
                            const std::vector<int>& item_size) {
  const int n_helpers = specs.num_helpers();
  std::vector<double> used(n_helpers, 0.0);
  for (int f = 0; f < placement.num_files(); ++f) {
    const auto& row = placement.rho[f];
    if (static_cast<int>(row.size()) != n_helpers) {
      throw InvalidParameter("coded placement width differs from helper count");
    }
    const double size = item_size.empty() ? 1.0 : item_size[f];
    for (int h = 0; h < n_helpers; ++h) {
      if (!(row[h] >= 0.0 && row[h] <= 1.0)) {
        throw InvalidParameter(
            fmt::format("rho[{}][{}] = {} outside [0, 1]", f + 1, h, row[h]));
      }
      used[h] += size * row[h];
    }
  }
  for (int h = 0; h < n_helpers; ++h) {
    if (used[h] > specs.capacity[h] + 1e-9) {
      throw InvalidParameter(fmt::format(
          "helper {} stores {} files of coded symbols, capacity {}", h, used[h],
          specs.capacity[h]));
    }
  }
}

CodedPlacement ToCoded(const UncodedPlacement& placement, int m) {
  CodedPlacement coded;
  coded.rho.assign(m, std::vector<double>(placement.num_helpers(), 0.0));
  for (int h = 0; h < placement.num_helpers(); ++h) {
    for (int rank : placement.cache[h]) coded.rho[rank - 1][h] = 1.0;
  }
  return coded;
}

LpInstance BuildLp(const ConnectivityGraph& graph, const PopularityModel& pop,
                   const HelperSpecs& specs, double file_bits,
                   std::vector<int> item_size) {
  if (graph.num_users() == 0) {
    throw DegenerateInstance("placement LP needs at least one user");
  }
  if (specs.num_helpers() != graph.num_helpers()) {
    throw InvalidParameter("helper specs and connectivity graph disagree");
  }
  if (item_size.empty()) item_size.assign(pop.m(), 1);
  if (static_cast<int>(item_size.size()) != pop.m()) {
    throw InvalidParameter("item sizes must match the catalog");
  }

  LpInstance inst;
  inst.num_files = pop.m();
  inst.num_helpers = graph.num_helpers();
  inst.num_users = graph.num_users();
  inst.item_size = std::move(item_size);
  inst.file_bits = file_bits;
  for (int u = 0; u < graph.num_users(); ++u) {
    inst.baseline_delay += file_bits / graph.bs_rate(u);
  }

  // Usable edges per user.
  std::vector<std::vector<Link>> usable(graph.num_users());
  for (int u = 0; u < graph.num_users(); ++u) {
    for (const Link& l : graph.links(u)) {
      if (l.rate_bps >= graph.bs_rate(u)) {
        usable[u].push_back(l);
      } else {
        ++inst.dropped_edges;
      }
    }
  }
  if (inst.dropped_edges > 0) {
    inst.warnings.push_back(fmt::format(
        "dropped {} helper links slower than the BS link", inst.dropped_edges));
  }

  LpProblem& lp = inst.problem;
  const int n_rho = inst.num_rho_vars();
  lp.objective.assign(n_rho, 0.0);
  for (int u = 0; u < graph.num_users(); ++u) {
    for (int f = 0; f < pop.m(); ++f) {
      for (const Link& l : usable[u]) {
        inst.aux.push_back({u, f, l.helper});
        const double w = 1.0 / graph.bs_rate(u) - 1.0 / l.rate_bps;
        lp.objective.push_back(pop.pmf()[f] * file_bits * w);
      }
    }
  }
  lp.num_vars = static_cast<int>(lp.objective.size());

  // Aux variables are laid out user-major then file, so each (u, f) block is
  // contiguous.
  int var = n_rho;
  for (int u = 0; u < graph.num_users(); ++u) {
    const int k = static_cast<int>(usable[u].size());
    for (int f = 0; f < pop.m(); ++f) {
      for (int i = 0; i < k; ++i) {
        const int h = usable[u][i].helper;
        lp.rows.push_back(
            {{{var + i, 1.0}, {inst.rho_var(f, h), -1.0}}, 0.0,
             fmt::format("a_le_rho_u{}_f{}_h{}", u, f + 1, h)});
      }
      // With a single helper, a <= rho <= 1 already implies the bound.
      if (k >= 2) {
        LpRow row{{}, 1.0, fmt::format("fetch_u{}_f{}", u, f + 1)};
        for (int i = 0; i < k; ++i) row.coeffs.push_back({var + i, 1.0});
        lp.rows.push_back(std::move(row));
      }
      var += k;
    }
  }
  for (int h = 0; h < inst.num_helpers; ++h) {
    LpRow row{{}, static_cast<double>(std::max(specs.capacity[h], 0)),
              fmt::format("capacity_h{}", h)};
    for (int f = 0; f < pop.m(); ++f) {
      row.coeffs.push_back(
          {inst.rho_var(f, h), static_cast<double>(inst.item_size[f])});
    }
    lp.rows.push_back(std::move(row));
  }
  for (int f = 0; f < pop.m(); ++f) {
    for (int h = 0; h < inst.num_helpers; ++h) {
      lp.rows.push_back({{{inst.rho_var(f, h), 1.0}}, 1.0,
                         fmt::format("rho_le_1_f{}_h{}", f + 1, h)});
    }
  }
  return inst;
}

CodedSolution SolveLpTraced(const LpInstance& instance,
                            const SimplexOptions& options) {
  CodedSolution out;
  out.placement.rho.assign(instance.num_files,
                           std::vector<double>(instance.num_helpers, 0.0));
  if (instance.problem.num_vars == 0) return out;
  const LpSolution sol = SolveSimplex(instance.problem, options);
  if (sol.status != LpStatus::kOptimal) {
    // All-zero is feasible and the objective is bounded by the box rows.
    throw IterationLimit("placement LP did not reach an optimal vertex");
  }
  for (int f = 0; f < instance.num_files; ++f) {
    for (int h = 0; h < instance.num_helpers; ++h) {
      out.placement.rho[f][h] =
          std::clamp(sol.x[instance.rho_var(f, h)], 0.0, 1.0);
    }
  }
  out.objective = sol.objective;
  out.pivots = sol.pivots;
  return out;
}

CodedPlacement SolveLp(const LpInstance& instance,
                       const SimplexOptions& options) {
  return SolveLpTraced(instance, options).placement;
}

double EvaluateCodedDelay(const CodedPlacement& placement,
                          const ConnectivityGraph& graph,
                          const PopularityModel& pop, double file_bits) {
  if (placement.num_files() != pop.m() ||
      (pop.m() > 0 && graph.num_helpers() > 0 &&
       placement.num_helpers() != graph.num_helpers())) {
    throw InvalidParameter("coded placement shape does not match the instance");
  }
  for (const auto& row : placement.rho) {
    for (double r : row) {
      if (!(r >= 0.0 && r <= 1.0)) {
        throw InvalidParameter("coded fractions must lie in [0, 1]");
      }
    }
  }
  double total = 0.0;
  std::vector<Link> order;
  for (int u = 0; u < graph.num_users(); ++u) {
    const double bs = graph.bs_rate(u);
    order.clear();
    for (const Link& l : graph.links(u)) {
      if (l.rate_bps >= bs) order.push_back(l);
    }
    std::stable_sort(order.begin(), order.end(), [](const Link& a, const Link& b) {
      return a.rate_bps > b.rate_bps;
    });
    for (int f = 0; f < pop.m(); ++f) {
      double need = 1.0;
      double t = 0.0;
      for (const Link& l : order) {
        if (need <= 0.0) break;
        const double take = std::min(placement.rho[f][l.helper], need);
        t += take / l.rate_bps;
        need -= take;
      }
      t += std::max(need, 0.0) / bs;
      total += pop.pmf()[f] * file_bits * t;
    }
  }
  return total;
}

FileGrouping GroupFiles(const PopularityModel& pop, int group_count) {
  const int m = pop.m();
  if (group_count < 1 || group_count > m) {
    throw InvalidParameter(
        fmt::format("group count must be in [1, {}], got {}", m, group_count));
  }
  const int base = m / group_count;
  const int extra = m % group_count;
  std::vector<double> weights(group_count, 0.0);
  FileGrouping g{PopularityModel::FromWeights({1.0}), {}, {}, {}};
  g.group_of_rank.resize(m);
  int rank = 0;
  for (int k = 0; k < group_count; ++k) {
    const int size = base + (k < extra ? 1 : 0);
    g.group_size.push_back(size);
    g.first_rank.push_back(rank + 1);
    long double mass = 0.0L;
    for (int i = 0; i < size; ++i, ++rank) {
      g.group_of_rank[rank] = k;
      mass += pop.pmf()[rank];
    }
    weights[k] = static_cast<double>(mass);
  }
  g.grouped = PopularityModel::FromWeights(std::move(weights));
  return g;
}

CodedPlacement ExpandGroupedPlacement(const CodedPlacement& grouped,
                                      const FileGrouping& grouping) {
  CodedPlacement out;
  out.rho.reserve(grouping.group_of_rank.size());
  for (int g : grouping.group_of_rank) out.rho.push_back(grouped.rho[g]);
  return out;
}

CodedPlacement SolveGroupedPlacement(const ConnectivityGraph& graph,
                                     const PopularityModel& pop,
                                     const HelperSpecs& specs, double file_bits,
                                     int group_count,
                                     const SimplexOptions& options) {
  const FileGrouping grouping = GroupFiles(pop, group_count);
  const LpInstance inst =
      BuildLp(graph, grouping.grouped, specs, file_bits, grouping.group_size);
  return ExpandGroupedPlacement(SolveLp(inst, options), grouping);
}

void WriteCodedPlacementCsv(const CodedPlacement& placement, std::ostream& out) {
  out << "file_rank,helper_id,rho\n";
  for (int f = 0; f < placement.num_files(); ++f) {
    for (int h = 0; h < placement.num_helpers(); ++h) {
      const double r = placement.rho[f][h];
      if (r > 0.0) out << fmt::format("{},{},{:.17g}\n", f + 1, h, r);
    }
  }
}

}  // namespace femtocache
