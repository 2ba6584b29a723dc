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
//
// Brute-force reference implementations for cross-checking the engine. The
// spatial and counting logic here is written from scratch on purpose: these
// helpers must not call into the library code they are used to verify.

#ifndef VDS_TESTS_ORACLES_HPP_
#define VDS_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vds/scene.hpp"

namespace vds::testing {

// Independent reading of "entity a lies in direction pos relative to b":
// positive projection of the displacement onto the direction vector, using
// its own arithmetic throughout.
inline bool oracle_relates(const Scene& scene, int a, int b, Position pos) {
  const Vec3& d = scene.direction(pos);
  const Vec3& pa = scene.entities[a].coords;
  const Vec3& pb = scene.entities[b].coords;
  double proj = (pa.x - pb.x) * d.x + (pa.y - pb.y) * d.y + (pa.z - pb.z) * d.z;
  return proj > 1e-6;
}

inline int oracle_count_rel(const Scene& scene, int referent, Position pos) {
  int n = 0;
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (e != referent && oracle_relates(scene, e, referent, pos)) ++n;
  }
  return n;
}

// Entities other than the referent sharing its value on one dimension.
inline int oracle_count_exclude(const Scene& scene, int referent, size_t dim) {
  const std::string& v = scene.entities[referent].attributes.at(dim);
  int n = 0;
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (e != referent && scene.entities[e].attributes.at(dim) == v) ++n;
  }
  return n;
}

inline int oracle_count_value(const Scene& scene, size_t dim,
                              const std::string& value) {
  int n = 0;
  for (const Entity& e : scene.entities) {
    if (e.attributes.at(dim) == value) ++n;
  }
  return n;
}

inline int oracle_count_value_in(const Scene& scene,
                                 const std::vector<int>& members, size_t dim,
                                 const std::string& value) {
  int n = 0;
  for (int e : members) {
    if (scene.entities[e].attributes.at(dim) == value) ++n;
  }
  return n;
}

inline int oracle_count_unseen(const Scene& scene,
                               const std::set<int>& seen) {
  int n = 0;
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (!seen.count(e)) ++n;
  }
  return n;
}

// Earliest entity in mention order whose full attribute tuple carries the
// value (mirrors a fetch against records seeded with complete knowledge).
inline std::optional<int> oracle_fetch_full(const Scene& scene,
                                            const std::vector<int>& mention_order,
                                            size_t dim,
                                            const std::string& value) {
  for (int e : mention_order) {
    if (scene.entities[e].attributes.at(dim) == value) return e;
  }
  return std::nullopt;
}

// Nearest entity (ground-plane distance, ties to the lowest index) among
// those lying in the given direction from the referent.
inline std::optional<int> oracle_nearest_in_direction(const Scene& scene,
                                                      int referent,
                                                      Position pos) {
  std::optional<int> best;
  double best_dist = 0.0;
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (e == referent || !oracle_relates(scene, e, referent, pos)) continue;
    const Vec3& pe = scene.entities[e].coords;
    const Vec3& pr = scene.entities[referent].coords;
    double dx = pe.x - pr.x, dy = pe.y - pr.y;
    double dist = std::sqrt(dx * dx + dy * dy);
    if (!best || dist < best_dist - 1e-12) {
      best = e;
      best_dist = dist;
    }
  }
  return best;
}

// --- scene construction helpers ------------------------------------------

// Entities from (size, colour, material, shape, x, y) rows, z derived from
// size like the generator does.
struct EntitySpec {
  std::string size, colour, material, shape;
  double x = 0.0, y = 0.0;
};

inline Scene make_scene(const std::vector<EntitySpec>& specs, int id = 0) {
  Scene s;
  s.id = id;
  int i = 0;
  for (const EntitySpec& e : specs) {
    Entity ent;
    ent.index = i++;
    ent.attributes = {e.size, e.colour, e.material, e.shape};
    ent.coords = {e.x, e.y, e.size == "small" ? 0.35 : 0.7};
    s.entities.push_back(std::move(ent));
  }
  return s;
}

}  // namespace vds::testing

#endif  // VDS_TESTS_ORACLES_HPP_
