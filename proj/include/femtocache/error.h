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

#ifndef FEMTOCACHE_ERROR_H_
#define FEMTOCACHE_ERROR_H_

#include <stdexcept>
#include <string>

namespace femtocache {

// A caller-supplied value violates a documented precondition.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Not enough observations to estimate a model.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive search refused because the search space exceeds its guard.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The optimization instance has nothing to optimize (no users or files).
class DegenerateInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simplex solver hit its pivot limit.
class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace femtocache

#endif  // FEMTOCACHE_ERROR_H_
