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

#ifndef FEMTOCACHE_POPULARITY_H_
#define FEMTOCACHE_POPULARITY_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "femtocache/rng.h"

namespace femtocache {

// Largest catalog the dense pmf representation accepts.
inline constexpr std::int64_t kMaxCatalogSize = 10'000'000;

// Request distribution over a catalog of m files indexed by popularity rank.
// Ranks are 1-based in the public API (rank 1 is the most popular file).
// Immutable after construction.
class PopularityModel {
 public:
  // Zipf(gamma, m): pmf[i] = i^-gamma / sum_j j^-gamma, normalized by direct
  // summation.
  static PopularityModel Zipf(double gamma, std::int64_t m);

  // Arbitrary non-increasing pmf (used for grouped catalogs). The weights are
  // renormalized to sum to one.
  static PopularityModel FromWeights(std::vector<double> weights);

  int m() const { return static_cast<int>(pmf_.size()); }
  // Zipf exponent, absent for models built from arbitrary weights.
  std::optional<double> gamma() const { return gamma_; }

  double Pmf(int rank) const { return pmf_[rank - 1]; }
  std::span<const double> pmf() const { return pmf_; }
  // cdf()[k-1] = P(rank <= k); the last entry is exactly 1.
  std::span<const double> cdf() const { return cdf_; }

 private:
  PopularityModel(std::optional<double> gamma, std::vector<double> pmf);

  std::optional<double> gamma_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

PopularityModel BuildZipf(double gamma, std::int64_t m);

// Inverse-CDF draw; returns a rank in [1, m].
int SampleRequest(const PopularityModel& model, Rng& rng);

// Sum of the K largest probabilities. 0 <= K <= m.
double HeadMass(const PopularityModel& model, std::int64_t k);

// Catalog size as a function of the user population: max(1, round(scale*ln N)).
std::int64_t CatalogSize(std::int64_t n_users, double scale = 1.0);

struct RequestTrace {
  // (file id, request count); every retained count is >= 1.
  std::vector<std::pair<std::int64_t, std::int64_t>> counts;
  std::int64_t total_requests = 0;
};

// Parses `file_id,count` CSV (header required). Zero counts are dropped.
RequestTrace ReadTraceCsv(std::istream& in);
void WriteTraceCsv(const RequestTrace& trace, std::ostream& out);

// Histogram of `draws` requests sampled from `model`; file id = rank.
RequestTrace SampleTrace(const PopularityModel& model, std::int64_t draws,
                         Rng& rng);

struct ZipfFit {
  double gamma_hat = 0.0;
  std::int64_t m_hat = 0;
};

// Least-squares fit of log(count) against log(rank) after sorting counts in
// descending order (ties by ascending file id). gamma_hat is the negated
// slope and m_hat the number of distinct files.
ZipfFit FitZipf(const RequestTrace& trace);

// `gamma_hat=...` / `m_hat=...` lines.
std::string FormatFit(const ZipfFit& fit);

}  // namespace femtocache

#endif  // FEMTOCACHE_POPULARITY_H_
