// Copyright 2026 The VDS Authors. All rights reserved.
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

#include "vds/metrics.hpp"

#include <string>

#include "vds/error.hpp"

namespace vds {

int first_failure_round(const std::vector<bool>& correct) {
  for (size_t i = 0; i < correct.size(); ++i) {
    if (!correct[i]) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(correct.size()) + 1;
}

Fraction nffr_fraction(const std::vector<std::vector<bool>>& correct,
                       int rounds) {
  if (correct.empty()) {
    throw EmptyInputError("nffr needs at least one dialog");
  }
  if (rounds < 1) {
    throw ArgumentError("nffr needs at least one round per dialog");
  }
  int64_t sum = 0;
  for (size_t i = 0; i < correct.size(); ++i) {
    if (static_cast<int>(correct[i].size()) != rounds) {
      throw ArgumentError("dialog " + std::to_string(i) + " has " +
                          std::to_string(correct[i].size()) +
                          " rounds, expected " + std::to_string(rounds));
    }
    sum += first_failure_round(correct[i]);
  }
  return Fraction{sum,
                  static_cast<int64_t>(correct.size()) * (rounds + 1)};
}

double nffr(const std::vector<std::vector<bool>>& correct, int rounds) {
  return nffr_fraction(correct, rounds).value();
}

double ffr(const std::vector<std::vector<bool>>& correct, int rounds) {
  Fraction f = nffr_fraction(correct, rounds);
  return static_cast<double>(f.num) / static_cast<double>(correct.size());
}

}  // namespace vds
