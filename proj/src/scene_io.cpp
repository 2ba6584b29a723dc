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

#include "vds/scene_io.hpp"

#include <fstream>

#include "vds/error.hpp"

namespace vds {
namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
      !j[1].is_number() || !j[2].is_number()) {
    throw SchemaError(what + ": expected a 3-number array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json vec3_to_json(const Vec3& v) {
  return nlohmann::json::array({v.x, v.y, v.z});
}

Scene scene_from_json(const nlohmann::json& js, const AttributeSchema& schema,
                      size_t max_entities) {
  Scene scene;
  scene.id = js.value("image_index", 0);
  const std::string where = "scene " + std::to_string(scene.id);
  if (!js.contains("objects") || !js.at("objects").is_array()) {
    throw SchemaError(where + ": missing 'objects' array");
  }
  for (const auto& jo : js.at("objects")) {
    Entity e;
    e.index = scene.entity_count();
    for (size_t d = 0; d < schema.dimension_count(); ++d) {
      const std::string key = file_key_for_dimension(schema.dimension(d));
      if (!jo.contains(key) || !jo.at(key).is_string()) {
        throw SchemaError(where + ": entity " + std::to_string(e.index) +
                          " is missing '" + key + "'");
      }
      e.attributes.push_back(jo.at(key).get<std::string>());
    }
    if (!jo.contains("3d_coords")) {
      throw SchemaError(where + ": entity " + std::to_string(e.index) +
                        " is missing '3d_coords'");
    }
    e.coords = vec3_from_json(jo.at("3d_coords"), where + " 3d_coords");
    scene.entities.push_back(std::move(e));
  }
  if (js.contains("directions")) {
    const auto& jd = js.at("directions");
    for (Position pos : kAllPositions) {
      const char* name = to_string(pos);
      if (!jd.contains(name)) {
        throw SchemaError(where + ": directions block is missing '" +
                          std::string(name) + "'");
      }
      scene.directions[static_cast<size_t>(pos)] =
          vec3_from_json(jd.at(name), where + " direction " + name);
    }
  }
  validate_scene(scene, schema, max_entities);
  return scene;
}

}  // namespace

std::string file_key_for_dimension(const std::string& dimension) {
  return dimension == "colour" ? "color" : dimension;
}

std::vector<Scene> scenes_from_json(const nlohmann::json& j,
                                    const AttributeSchema& schema,
                                    size_t max_entities) {
  if (!j.is_object() || !j.contains("scenes") || !j.at("scenes").is_array()) {
    throw SchemaError("scene file needs a top-level 'scenes' array");
  }
  std::vector<Scene> scenes;
  for (const auto& js : j.at("scenes")) {
    scenes.push_back(scene_from_json(js, schema, max_entities));
  }
  return scenes;
}

std::vector<Scene> load_scenes(const std::string& path,
                               const AttributeSchema& schema,
                               size_t max_entities) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scene file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed scene file '" + path + "': " + e.what(),
                     e.byte);
  }
  return scenes_from_json(j, schema, max_entities);
}

nlohmann::json scenes_to_json(const std::vector<Scene>& scenes,
                              const AttributeSchema& schema) {
  nlohmann::json out;
  out["scenes"] = nlohmann::json::array();
  for (const Scene& scene : scenes) {
    nlohmann::json js;
    js["image_index"] = scene.id;
    js["objects"] = nlohmann::json::array();
    for (const Entity& e : scene.entities) {
      nlohmann::json jo;
      for (size_t d = 0; d < schema.dimension_count(); ++d) {
        jo[file_key_for_dimension(schema.dimension(d))] = e.attributes[d];
      }
      jo["3d_coords"] = vec3_to_json(e.coords);
      js["objects"].push_back(std::move(jo));
    }
    nlohmann::json jd;
    for (Position pos : kAllPositions) {
      jd[to_string(pos)] = vec3_to_json(scene.direction(pos));
    }
    js["directions"] = std::move(jd);
    out["scenes"].push_back(std::move(js));
  }
  return out;
}

void save_scenes(const std::string& path, const std::vector<Scene>& scenes,
                 const AttributeSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scene file '" + path + "'");
  out << scenes_to_json(scenes, schema).dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace vds
