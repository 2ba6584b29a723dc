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

#ifndef VDS_SCENE_HPP_
#define VDS_SCENE_HPP_

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vds/schema.hpp"

namespace vds {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
// Distance in the ground plane; the z component is a size offset, not a
// spatial coordinate.
inline double xy_distance(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

enum class Position { kRight, kLeft, kFront, kBehind };

inline constexpr std::array<Position, 4> kAllPositions = {
    Position::kRight, Position::kLeft, Position::kFront, Position::kBehind};

const char* to_string(Position pos);
std::optional<Position> parse_position(std::string_view token);

// Partial attribute assignment keyed by schema dimension index. A map (not
// unordered) so iteration follows the canonical dimension order.
using AttrMap = std::map<size_t, std::string>;

struct Entity {
  int index = 0;
  std::vector<std::string> attributes;  // one value per schema dimension
  Vec3 coords;

  const std::string& attribute(size_t dim) const { return attributes.at(dim); }
};

struct Scene {
  int id = 0;
  std::vector<Entity> entities;
  std::array<Vec3, 4> directions = default_directions();  // by Position

  // Axis-aligned defaults: right = +x, front = -y, opposites negated.
  static std::array<Vec3, 4> default_directions();
  const Vec3& direction(Position pos) const {
    return directions[static_cast<size_t>(pos)];
  }
  int entity_count() const { return static_cast<int>(entities.size()); }
};

inline constexpr double kSpatialEps = 1e-6;
inline constexpr size_t kDefaultMaxEntities = 20;

// Throws SchemaError/IndexError when the scene violates structural rules
// (entity count bounds, attribute validity, direction consistency).
void validate_scene(const Scene& scene, const AttributeSchema& schema,
                    size_t max_entities = kDefaultMaxEntities);

// True iff entity a lies in direction pos relative to entity b, i.e. the
// projection of (coords[a] - coords[b]) onto the direction exceeds eps.
bool relates(const Scene& scene, int a, int b, Position pos);

struct ExtremePick {
  int entity = -1;
  // Another candidate scored within kSpatialEps of the winner; the pick is
  // still deterministic (lowest index) but the phrasing is ambiguous.
  bool tied = false;
};

// Candidate with the largest projection onto the direction.
ExtremePick extreme_directional(const Scene& scene,
                                const std::vector<int>& candidates,
                                Position pos);
// Candidate closest (ground-plane distance) to the centroid of ALL entities.
ExtremePick extreme_centre(const Scene& scene,
                           const std::vector<int>& candidates);

// Ascending entity indices satisfying all constraints; empty constraints
// return every entity.
std::vector<int> filter_by_attrs(const Scene& scene,
                                 const AttributeSchema& schema,
                                 const AttrMap& constraints);

// Convenience: bare value tokens -> constraints -> filter. Values must be
// schema values from pairwise-distinct dimensions.
std::vector<int> filter_by_values(const Scene& scene,
                                  const AttributeSchema& schema,
                                  const std::vector<std::string>& values);

// Turns bare value tokens into a dimension-keyed constraint map.
AttrMap constraints_from_values(const AttributeSchema& schema,
                                const std::vector<std::string>& values);

}  // namespace vds

#endif  // VDS_SCENE_HPP_
