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

#include "femtocache/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "femtocache/error.h"

namespace femtocache {
namespace {

// Tableau layout (rows x cols = (m+2) x (n+2)):
//   rows 0..m-1   constraints, column n+1 holds the basic values
//   row m         objective (negated reduced costs)
//   row m+1       feasibility objective (drives the artificial to zero)
//   column n      artificial variable used to reach a feasible basis
// Variable ids: 0..n-1 structural, n..n+m-1 slack, -1 artificial.
class Tableau {
 public:
  Tableau(const LpProblem& p, const std::vector<double>& cost,
          const SimplexOptions& options)
      : m_(static_cast<int>(p.rows.size())),
        n_(p.num_vars),
        width_(n_ + 2),
        data_(static_cast<std::size_t>(m_ + 2) * width_, 0.0),
        basic_(m_),
        nonbasic_(n_ + 1),
        options_(options) {
    const long size = std::max(1, n_ + m_);
    pivot_limit_ = options.iteration_factor * size;
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, v] : p.rows[i].coeffs) At(i, j) += v;
      At(i, n_) = -1.0;
      At(i, n_ + 1) = p.rows[i].rhs;
      basic_[i] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      At(m_, j) = -cost[j];
    }
    nonbasic_[n_] = -1;
    At(m_ + 1, n_) = 1.0;
  }

  LpStatus Solve() {
    const double eps = options_.tolerance;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (At(i, n_ + 1) < At(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && At(r, n_ + 1) < -eps) {
      Pivot(r, n_);
      if (!Run(/*feasibility=*/true) || At(m_ + 1, n_ + 1) < -eps) {
        return LpStatus::kInfeasible;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j) {
          if (Prefer(At(i, j), nonbasic_[j], At(i, s), nonbasic_[s])) s = j;
        }
        Pivot(i, s);
      }
    }
    return Run(/*feasibility=*/false) ? LpStatus::kOptimal
                                     : LpStatus::kUnbounded;
  }

  double Objective() const { return At(m_, n_ + 1); }

  std::vector<double> Primal() const {
    std::vector<double> x(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && basic_[i] < n_) x[basic_[i]] = At(i, n_ + 1);
    }
    return x;
  }

  long pivots() const { return pivots_; }

 private:
  double& At(int i, int j) {
    return data_[static_cast<std::size_t>(i) * width_ + j];
  }
  double At(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * width_ + j];
  }

  // Smaller value wins; ties go to the smaller variable id.
  static bool Prefer(double a, int id_a, double b, int id_b) {
    return a < b || (a == b && id_a < id_b);
  }

  void Pivot(int r, int s) {
    if (++pivots_ > pivot_limit_) {
      throw IterationLimit(fmt::format(
          "simplex exceeded {} pivots ({} vars, {} rows)", pivot_limit_, n_, m_));
    }
    double* row_r = &At(r, 0);
    const double inv = 1.0 / row_r[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row_i = &At(i, 0);
      if (row_i[s] == 0.0) continue;
      const double f = row_i[s] * inv;
      for (int j = 0; j < width_; ++j) row_i[j] -= row_r[j] * f;
      row_i[s] = -f;
    }
    for (int j = 0; j < width_; ++j) {
      if (j != s) row_r[j] *= inv;
    }
    row_r[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Optimizes the objective row (or the feasibility row). False when
  // unbounded.
  bool Run(bool feasibility) {
    const double eps = options_.tolerance;
    const int obj = feasibility ? m_ + 1 : m_;
    int degenerate_run = 0;
    while (true) {
      const bool bland =
          options_.rule == PivotRule::kBland || degenerate_run >= kBlandAfter;
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (!feasibility && nonbasic_[j] == -1) continue;  // artificial
        const double d = At(obj, j);
        if (d >= -eps) continue;
        if (s == -1) {
          s = j;
        } else if (bland) {
          if (nonbasic_[j] < nonbasic_[s]) s = j;
        } else if (Prefer(d, nonbasic_[j], At(obj, s), nonbasic_[s])) {
          s = j;
        }
      }
      if (s == -1) return true;

      int r = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = At(i, s);
        if (a <= eps) continue;
        const double ratio = At(i, n_ + 1) / a;
        if (r == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basic_[i] < basic_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == -1) return false;
      degenerate_run = best_ratio <= eps ? degenerate_run + 1 : 0;
      Pivot(r, s);
    }
  }

  static constexpr int kBlandAfter = 8;

  int m_;
  int n_;
  int width_;
  std::vector<double> data_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  SimplexOptions options_;
  long pivot_limit_ = 0;
  long pivots_ = 0;
};

}  // namespace

LpSolution SolveSimplex(const LpProblem& problem,
                        const SimplexOptions& options) {
  if (static_cast<int>(problem.objective.size()) != problem.num_vars) {
    throw InvalidParameter("objective length differs from variable count");
  }
  for (const LpRow& row : problem.rows) {
    if (!std::isfinite(row.rhs)) throw InvalidParameter("non-finite LP rhs");
    for (const auto& [j, v] : row.coeffs) {
      if (j < 0 || j >= problem.num_vars || !std::isfinite(v)) {
        throw InvalidParameter("LP row references a bad variable/coefficient");
      }
    }
  }
  // Scale costs to unit magnitude so the pricing tolerance is relative.
  double scale = 0.0;
  for (double c : problem.objective) {
    if (!std::isfinite(c)) throw InvalidParameter("non-finite LP objective");
    scale = std::max(scale, std::abs(c));
  }
  if (scale == 0.0) scale = 1.0;
  std::vector<double> cost(problem.objective);
  for (double& c : cost) c /= scale;

  Tableau tableau(problem, cost, options);
  LpSolution sol;
  sol.status = tableau.Solve();
  sol.pivots = tableau.pivots();
  if (sol.status == LpStatus::kOptimal) {
    sol.x = tableau.Primal();
    double obj = 0.0;
    for (int j = 0; j < problem.num_vars; ++j) {
      obj += problem.objective[j] * sol.x[j];
    }
    sol.objective = obj;
  } else {
    sol.x.assign(problem.num_vars, 0.0);
    sol.objective = sol.status == LpStatus::kUnbounded
                        ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
  }
  return sol;
}

void WriteMps(const LpProblem& problem, std::ostream& out,
              const std::string& name) {
  // Maximization is written as minimization of the negated objective.
  out << "NAME " << name << "\nROWS\n N COST\n";
  auto row_name = [&](std::size_t i) {
    return problem.rows[i].name.empty() ? fmt::format("R{}", i)
                                        : problem.rows[i].name;
  };
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    out << " L " << row_name(i) << '\n';
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(problem.num_vars);
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    for (const auto& [j, v] : problem.rows[i].coeffs) cols[j].push_back({i, v});
  }
  out << "COLUMNS\n";
  for (int j = 0; j < problem.num_vars; ++j) {
    if (problem.objective[j] != 0.0) {
      out << fmt::format(" X{} COST {:.17g}\n", j, -problem.objective[j]);
    }
    for (const auto& [i, v] : cols[j]) {
      out << fmt::format(" X{} {} {:.17g}\n", j, row_name(i), v);
    }
  }
  out << "RHS\n";
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    if (problem.rows[i].rhs != 0.0) {
      out << fmt::format(" RHS {} {:.17g}\n", row_name(i), problem.rows[i].rhs);
    }
  }
  out << "ENDATA\n";
}

}  // namespace femtocache
