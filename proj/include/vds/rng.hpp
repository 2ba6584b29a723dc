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

#ifndef VDS_RNG_HPP_
#define VDS_RNG_HPP_

#include <cstdint>
#include <utility>
#include <vector>

namespace vds {

// Seeded splitmix64 stream. The <random> engines are portable but the
// standard distributions are implementation-defined, which would break the
// bit-reproducibility contract of generated artifacts; every draw here is
// specified exactly.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, n); n must be nonzero.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  size_t index(size_t n) { return static_cast<size_t>(below(n)); }

  // Uniform in [0, 1) with 53 bits of precision.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * real01(); }

  template <typename T>
  void shuffle(std::vector<T>* v) {
    for (size_t i = v->size(); i > 1; --i) {
      std::swap((*v)[i - 1], (*v)[index(i)]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  // Derives an independent child seed, e.g. one per generated dialog.
  static uint64_t derive(uint64_t base, uint64_t salt) {
    Rng r(base ^ (salt * 0xff51afd7ed558ccdull + 0x9e3779b97f4a7c15ull));
    r.next();
    return r.next();
  }

 private:
  uint64_t state_;
};

}  // namespace vds

#endif  // VDS_RNG_HPP_
