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

#ifndef FEMTOCACHE_STATS_H_
#define FEMTOCACHE_STATS_H_

#include <span>

namespace femtocache {

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n); 0 when n < 2
};

// Two-pass, in index order, so results do not depend on how the samples
// were produced.
MeanStderr Summarize(std::span<const double> samples);

}  // namespace femtocache

#endif  // FEMTOCACHE_STATS_H_
