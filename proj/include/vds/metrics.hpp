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

#ifndef VDS_METRICS_HPP_
#define VDS_METRICS_HPP_

#include <cstdint>
#include <vector>

namespace vds {

// 1-based index of the first incorrect round, or L+1 when every round of the
// dialog is correct.
int first_failure_round(const std::vector<bool>& correct);

// Exact rational form of the normalized first-failure metric: the sum of
// first-failure indices over the number of dialogs times L+1. Useful for
// comparing without floating-point error.
struct Fraction {
  int64_t num = 0;
  int64_t den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

// Normalized first-failure round: the mean over dialogs of f/(L+1), where f
// is the first failure index (L+1 if flawless). Always in (0, 1]; equal to 1
// exactly when every round of every dialog is correct.
// Throws EmptyInputError when `correct` is empty and ArgumentError when an
// inner list's length differs from L.
double nffr(const std::vector<std::vector<bool>>& correct, int rounds);
Fraction nffr_fraction(const std::vector<std::vector<bool>>& correct,
                       int rounds);

// Mean first-failure round, unnormalized: ffr = nffr * (L+1).
double ffr(const std::vector<std::vector<bool>>& correct, int rounds);

}  // namespace vds

#endif  // VDS_METRICS_HPP_
