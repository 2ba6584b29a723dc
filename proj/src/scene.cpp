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

#include "vds/scene.hpp"

#include <cmath>
#include <limits>

#include "vds/error.hpp"

namespace vds {
namespace {

void check_index(const Scene& scene, int i, const char* what) {
  if (i < 0 || i >= scene.entity_count()) {
    throw IndexError(std::string(what) + " index " + std::to_string(i) +
                     " out of range for scene with " +
                     std::to_string(scene.entity_count()) + " entities");
  }
}

bool nearly_opposite(const Vec3& a, const Vec3& b) {
  return std::abs(a.x + b.x) <= kSpatialEps &&
         std::abs(a.y + b.y) <= kSpatialEps &&
         std::abs(a.z + b.z) <= kSpatialEps;
}

}  // namespace

const char* to_string(Position pos) {
  switch (pos) {
    case Position::kRight:
      return "right";
    case Position::kLeft:
      return "left";
    case Position::kFront:
      return "front";
    case Position::kBehind:
      return "behind";
  }
  return "?";
}

std::optional<Position> parse_position(std::string_view token) {
  if (token == "right") return Position::kRight;
  if (token == "left") return Position::kLeft;
  if (token == "front") return Position::kFront;
  if (token == "behind") return Position::kBehind;
  return std::nullopt;
}

std::array<Vec3, 4> Scene::default_directions() {
  return {Vec3{1, 0, 0}, Vec3{-1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 1, 0}};
}

void validate_scene(const Scene& scene, const AttributeSchema& schema,
                    size_t max_entities) {
  const std::string where = "scene " + std::to_string(scene.id);
  if (scene.entities.empty()) {
    throw SchemaError(where + ": empty entity list");
  }
  if (scene.entities.size() > max_entities) {
    throw SchemaError(where + ": " + std::to_string(scene.entities.size()) +
                      " entities exceed the maximum of " +
                      std::to_string(max_entities));
  }
  for (size_t i = 0; i < scene.entities.size(); ++i) {
    const Entity& e = scene.entities[i];
    if (e.index != static_cast<int>(i)) {
      throw SchemaError(where + ": entity " + std::to_string(i) +
                        " has index " + std::to_string(e.index));
    }
    if (e.attributes.size() != schema.dimension_count()) {
      throw SchemaError(where + ": entity " + std::to_string(i) + " has " +
                        std::to_string(e.attributes.size()) +
                        " attributes, schema has " +
                        std::to_string(schema.dimension_count()) +
                        " dimensions");
    }
    for (size_t d = 0; d < e.attributes.size(); ++d) {
      auto vd = schema.value_dimension(e.attributes[d]);
      if (!vd || *vd != d) {
        throw SchemaError(where + ": entity " + std::to_string(i) +
                          ": value '" + e.attributes[d] +
                          "' is not valid for dimension '" +
                          schema.dimension(d) + "'");
      }
    }
  }
  if (!nearly_opposite(scene.direction(Position::kRight),
                       scene.direction(Position::kLeft)) ||
      !nearly_opposite(scene.direction(Position::kFront),
                       scene.direction(Position::kBehind))) {
    throw SchemaError(where + ": directions are not opposite pairs");
  }
}

bool relates(const Scene& scene, int a, int b, Position pos) {
  check_index(scene, a, "entity");
  check_index(scene, b, "entity");
  const Vec3 diff = scene.entities[a].coords - scene.entities[b].coords;
  return dot(diff, scene.direction(pos)) > kSpatialEps;
}

ExtremePick extreme_directional(const Scene& scene,
                                const std::vector<int>& candidates,
                                Position pos) {
  if (candidates.empty()) {
    throw EmptyCandidatesError("extreme over empty candidate set");
  }
  const Vec3& dir = scene.direction(pos);
  ExtremePick pick;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  for (int c : candidates) {
    check_index(scene, c, "candidate");
    double score = dot(scene.entities[c].coords, dir);
    if (score > best) {
      second = best;
      best = score;
      pick.entity = c;
    } else if (score > second) {
      second = score;
    }
  }
  pick.tied = (best - second) <= kSpatialEps;
  return pick;
}

ExtremePick extreme_centre(const Scene& scene,
                           const std::vector<int>& candidates) {
  if (candidates.empty()) {
    throw EmptyCandidatesError("extreme-centre over empty candidate set");
  }
  Vec3 centroid;
  for (const Entity& e : scene.entities) centroid = centroid + e.coords;
  const double n = static_cast<double>(scene.entities.size());
  centroid = {centroid.x / n, centroid.y / n, 0.0};

  ExtremePick pick;
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  for (int c : candidates) {
    check_index(scene, c, "candidate");
    Vec3 flat = scene.entities[c].coords;
    flat.z = 0.0;
    double dist = xy_distance(flat, centroid);
    if (dist < best) {
      second = best;
      best = dist;
      pick.entity = c;
    } else if (dist < second) {
      second = dist;
    }
  }
  pick.tied = (second - best) <= kSpatialEps;
  return pick;
}

std::vector<int> filter_by_attrs(const Scene& scene,
                                 const AttributeSchema& schema,
                                 const AttrMap& constraints) {
  for (const auto& [dim, value] : constraints) {
    if (dim >= schema.dimension_count()) {
      throw SchemaError("constraint dimension index " + std::to_string(dim) +
                        " out of range");
    }
    auto vd = schema.value_dimension(value);
    if (!vd || *vd != dim) {
      throw SchemaError("constraint value '" + value +
                        "' is not valid for dimension '" +
                        schema.dimension(dim) + "'");
    }
  }
  std::vector<int> out;
  for (const Entity& e : scene.entities) {
    bool ok = true;
    for (const auto& [dim, value] : constraints) {
      if (e.attributes[dim] != value) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(e.index);
  }
  return out;
}

AttrMap constraints_from_values(const AttributeSchema& schema,
                                const std::vector<std::string>& values) {
  AttrMap constraints;
  for (const std::string& v : values) {
    auto dim = schema.value_dimension(v);
    if (!dim) throw SchemaError("unknown attribute value '" + v + "'");
    if (!constraints.emplace(*dim, v).second) {
      throw SchemaError("values '" + constraints[*dim] + "' and '" + v +
                        "' share dimension '" + schema.dimension(*dim) + "'");
    }
  }
  return constraints;
}

std::vector<int> filter_by_values(const Scene& scene,
                                  const AttributeSchema& schema,
                                  const std::vector<std::string>& values) {
  return filter_by_attrs(scene, schema, constraints_from_values(schema, values));
}

}  // namespace vds
