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

#ifndef VDS_SCENE_GEN_HPP_
#define VDS_SCENE_GEN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vds/scene.hpp"

namespace vds {

struct SceneGenConfig {
  int n_objects = 5;
  // Per-dimension value subsets; a missing dimension allows all its values.
  std::map<std::string, std::vector<std::string>> allowed_values;
  double min_pairwise_distance = 0.8;  // ground-plane separation
  double region_half_extent = 3.0;     // coordinates drawn in [-r, r]^2
  int max_attempts = 10000;            // placement rejection budget
};

// Deterministic in (schema, config, seed). Attribute tuples are drawn
// without replacement until the distinct combinations are exhausted, so
// entities have unique attribute tuples whenever n_objects allows it.
Scene generate_scene(const AttributeSchema& schema, const SceneGenConfig& cfg,
                     uint64_t seed, int scene_id = 0);

}  // namespace vds

#endif  // VDS_SCENE_GEN_HPP_
