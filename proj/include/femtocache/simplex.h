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

#ifndef FEMTOCACHE_SIMPLEX_H_
#define FEMTOCACHE_SIMPLEX_H_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace femtocache {

// maximize c^T x  subject to  A x <= b,  x >= 0.
// Rows are stored sparsely; the solver densifies them.
struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  double rhs = 0.0;
  std::string name;
};

struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;  // size num_vars
  std::vector<LpRow> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// Entering-variable rule. kBland always picks the lowest-index improving
// column; kDantzig picks the most negative reduced cost but falls back to
// Bland's rule during runs of degenerate pivots, which rules out cycling.
enum class PivotRule { kDantzig, kBland };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double objective = 0.0;
  std::vector<double> x;
  long pivots = 0;
};

struct SimplexOptions {
  PivotRule rule = PivotRule::kDantzig;
  double tolerance = 1e-11;
  // Pivot limit is iteration_factor * max(1, num_vars + rows).
  long iteration_factor = 50;
};

// Dense two-phase tableau simplex. Throws IterationLimit when the pivot
// limit is reached.
LpSolution SolveSimplex(const LpProblem& problem,
                        const SimplexOptions& options = {});

// Free-format MPS-style dump for cross-checking with external solvers.
void WriteMps(const LpProblem& problem, std::ostream& out,
              const std::string& name = "FEMTOCACHE");

}  // namespace femtocache

#endif  // FEMTOCACHE_SIMPLEX_H_
