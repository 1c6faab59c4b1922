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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "femtocache/d2d_sim.h"
#include "femtocache/error.h"
#include "femtocache/experiment.h"
#include "femtocache/placement_coded.h"
#include "femtocache/placement_uncoded.h"
#include "femtocache/popularity.h"
#include "femtocache/topology.h"

namespace py = pybind11;

namespace femtocache {
namespace {

using PointList = std::vector<std::pair<double, double>>;

std::vector<Point> ToPoints(const PointList& xy) {
  std::vector<Point> out;
  out.reserve(xy.size());
  for (const auto& [x, y] : xy) out.push_back({x, y});
  return out;
}

HelperSpecs Specs(const ConnectivityGraph& graph, int capacity) {
  return HelperSpecs::Uniform(graph.num_helpers(), capacity);
}

D2DScenario MakeD2D(int n, int m, int cache_files, double r, double gamma,
                    const std::string& strategy, double gamma1) {
  D2DScenario s;
  s.n = n;
  s.m = m;
  s.cache_files = cache_files;
  s.r = r;
  s.gamma = gamma;
  s.gamma1 = gamma1;
  if (strategy == "deterministic") {
    s.strategy = CachingStrategy::kDeterministic;
  } else if (strategy == "random") {
    s.strategy = CachingStrategy::kRandomZipf;
  } else {
    throw InvalidParameter("strategy must be `deterministic` or `random`");
  }
  ValidateScenario(s);
  return s;
}

py::dict StatsDict(const ClusterStats& st) {
  py::dict d;
  d["expected_active"] = st.expected_active;
  d["std_error"] = st.std_error;
  d["clusters"] = st.clusters;
  d["warning"] = st.warning;
  return d;
}

}  // namespace
}  // namespace femtocache

PYBIND11_MODULE(_femtocache, m) {
  using namespace femtocache;
  m.doc() = "Helper caching placement and D2D cluster simulation.";

  py::register_exception<InvalidParameter>(m, "InvalidParameter",
                                           PyExc_ValueError);
  py::register_exception<InsufficientData>(m, "InsufficientData",
                                           PyExc_RuntimeError);
  py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge",
                                           PyExc_RuntimeError);
  py::register_exception<DegenerateInstance>(m, "DegenerateInstance",
                                             PyExc_RuntimeError);
  py::register_exception<IterationLimit>(m, "IterationLimit",
                                         PyExc_RuntimeError);

  m.attr("DEFAULT_FILE_BITS") = kDefaultFileBits;

  m.def(
      "zipf_pmf",
      [](double gamma, std::int64_t size) {
        const auto model = BuildZipf(gamma, size);
        return std::vector<double>(model.pmf().begin(), model.pmf().end());
      },
      py::arg("gamma"), py::arg("m"));
  m.def(
      "head_mass",
      [](double gamma, std::int64_t size, std::int64_t k) {
        return HeadMass(BuildZipf(gamma, size), k);
      },
      py::arg("gamma"), py::arg("m"), py::arg("k"));
  m.def(
      "fit_zipf",
      [](const std::vector<std::pair<std::int64_t, std::int64_t>>& counts) {
        RequestTrace trace;
        for (const auto& [id, c] : counts) {
          if (c <= 0) continue;
          trace.counts.emplace_back(id, c);
          trace.total_requests += c;
        }
        const ZipfFit fit = FitZipf(trace);
        return py::make_tuple(fit.gamma_hat, fit.m_hat);
      },
      py::arg("counts"),
      "Fits (gamma_hat, m_hat) to (file id, request count) pairs.");

  py::class_<ConnectivityGraph>(m, "ConnectivityGraph")
      .def(py::init([](int n_helpers,
                       const std::vector<std::vector<std::pair<int, double>>>&
                           user_links,
                       std::vector<double> bs_rate) {
             std::vector<std::vector<Link>> links(user_links.size());
             for (std::size_t u = 0; u < user_links.size(); ++u) {
               for (const auto& [h, rate] : user_links[u]) {
                 links[u].push_back({h, rate});
               }
             }
             return ConnectivityGraph(n_helpers, std::move(links),
                                      std::move(bs_rate));
           }),
           py::arg("n_helpers"), py::arg("user_links"), py::arg("bs_rate"))
      .def_property_readonly("num_users", &ConnectivityGraph::num_users)
      .def_property_readonly("num_helpers", &ConnectivityGraph::num_helpers)
      .def("rate", &ConnectivityGraph::rate, py::arg("user"),
           py::arg("helper"))
      .def("bs_rate", &ConnectivityGraph::bs_rate, py::arg("user"));

  m.def(
      "build_connectivity",
      [](const PointList& helpers, const PointList& users,
         double cell_radius) {
        CellLayout layout;
        layout.cell_radius = cell_radius;
        layout.helper_positions = ToPoints(helpers);
        layout.user_positions = ToPoints(users);
        return BuildConnectivity(layout);
      },
      py::arg("helpers"), py::arg("users"), py::arg("cell_radius") = 400.0,
      "Graph for a cell with the BS at the origin and default link models.");

  m.def(
      "greedy_place",
      [](const ConnectivityGraph& graph, double gamma, int size, int capacity,
         double file_bits) {
        return GreedyPlace(graph, BuildZipf(gamma, size),
                           Specs(graph, capacity), file_bits)
            .cache;
      },
      py::arg("graph"), py::arg("gamma"), py::arg("m"), py::arg("capacity"),
      py::arg("file_bits") = kDefaultFileBits,
      "Per-helper lists of cached popularity ranks (1-based).");
  m.def(
      "most_popular_place",
      [](int n_helpers, double gamma, int size, int capacity) {
        return MostPopularPlace(HelperSpecs::Uniform(n_helpers, capacity),
                                BuildZipf(gamma, size))
            .cache;
      },
      py::arg("n_helpers"), py::arg("gamma"), py::arg("m"),
      py::arg("capacity"));
  m.def(
      "brute_force_place",
      [](const ConnectivityGraph& graph, double gamma, int size, int capacity,
         double file_bits) {
        return BruteForcePlace(graph, BuildZipf(gamma, size),
                               Specs(graph, capacity), file_bits)
            .cache;
      },
      py::arg("graph"), py::arg("gamma"), py::arg("m"), py::arg("capacity"),
      py::arg("file_bits") = kDefaultFileBits);
  m.def(
      "evaluate_delay",
      [](const std::vector<std::vector<int>>& cache,
         const ConnectivityGraph& graph, double gamma, int size,
         double file_bits) {
        UncodedPlacement placement{cache};
        ValidatePlacement(placement, graph.num_helpers(), size);
        return EvaluateDelay(placement, graph, BuildZipf(gamma, size),
                             file_bits);
      },
      py::arg("cache"), py::arg("graph"), py::arg("gamma"), py::arg("m"),
      py::arg("file_bits") = kDefaultFileBits);
  m.def(
      "bs_only_delay",
      [](const ConnectivityGraph& graph, double gamma, int size,
         double file_bits) {
        return BsOnlyDelay(graph, BuildZipf(gamma, size), file_bits);
      },
      py::arg("graph"), py::arg("gamma"), py::arg("m"),
      py::arg("file_bits") = kDefaultFileBits);

  m.def(
      "coded_place",
      [](const ConnectivityGraph& graph, double gamma, int size, int capacity,
         double file_bits, int groups) {
        const auto pop = BuildZipf(gamma, size);
        const auto specs = Specs(graph, capacity);
        if (groups > 0) {
          return SolveGroupedPlacement(graph, pop, specs, file_bits, groups)
              .rho;
        }
        return SolveLp(BuildLp(graph, pop, specs, file_bits)).rho;
      },
      py::arg("graph"), py::arg("gamma"), py::arg("m"), py::arg("capacity"),
      py::arg("file_bits") = kDefaultFileBits, py::arg("groups") = 0,
      "rho[file][helper] fractions from the placement LP; groups > 0 solves "
      "the popularity-bucketed LP.");
  m.def(
      "evaluate_coded_delay",
      [](const std::vector<std::vector<double>>& rho,
         const ConnectivityGraph& graph, double gamma, int size,
         double file_bits) {
        return EvaluateCodedDelay(CodedPlacement{rho}, graph,
                                  BuildZipf(gamma, size), file_bits);
      },
      py::arg("rho"), py::arg("graph"), py::arg("gamma"), py::arg("m"),
      py::arg("file_bits") = kDefaultFileBits);

  m.def(
      "d2d_expected_active",
      [](int n, int size, int cache_files, double r, double gamma,
         const std::string& strategy, double gamma1) {
        const auto s =
            MakeD2D(n, size, cache_files, r, gamma, strategy, gamma1);
        return StatsDict(ExpectedActiveAnalytic(s, BuildZipf(gamma, size)));
      },
      py::arg("n"), py::arg("m"), py::arg("M") = 1, py::arg("r") = 0.1,
      py::arg("gamma") = 0.6, py::arg("strategy") = "deterministic",
      py::arg("gamma1") = 0.6);
  m.def(
      "d2d_simulate",
      [](int n, int size, int cache_files, double r, double gamma,
         const std::string& strategy, double gamma1, std::uint64_t seed,
         int reps) {
        const auto s =
            MakeD2D(n, size, cache_files, r, gamma, strategy, gamma1);
        ClusterStats st;
        {
          py::gil_scoped_release release;
          st = SimulateActiveClusters(s, BuildZipf(gamma, size), seed, reps);
        }
        return StatsDict(st);
      },
      py::arg("n"), py::arg("m"), py::arg("M") = 1, py::arg("r") = 0.1,
      py::arg("gamma") = 0.6, py::arg("strategy") = "deterministic",
      py::arg("gamma1") = 0.6, py::arg("seed") = 1, py::arg("reps") = 1000);

  m.def("experiments", &ExperimentNames);
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        const auto config = ConfigFromJson(config_json);
        py::gil_scoped_release release;
        return RunToString(config);
      },
      py::arg("config_json"),
      "Runs an experiment config (JSON with an `experiment` key) and returns "
      "its primary output.");
  m.def(
      "resolve_config_json",
      [](const std::string& config_json) {
        const auto resolved = ResolveConfig(ConfigFromJson(config_json));
        ValidateConfig(resolved);
        return ConfigToJson(resolved);
      },
      py::arg("config_json"));
  m.def("version", &Version);
}
