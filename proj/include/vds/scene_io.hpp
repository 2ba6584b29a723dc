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

#ifndef VDS_SCENE_IO_HPP_
#define VDS_SCENE_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "vds/scene.hpp"

namespace vds {

// Scene files are JSON: {"scenes": [{"image_index": int, "objects":
// [{"color", "size", "shape", "material", "3d_coords": [x,y,z]}, ...],
// "directions": {...}}]}. Files use the American spelling "color"; the
// internal dimension name is "colour". The directions block is optional and
// defaults to axis-aligned unit vectors. Unrecognized object keys are
// ignored so annotation files with extra fields load as-is.
std::vector<Scene> load_scenes(const std::string& path,
                               const AttributeSchema& schema,
                               size_t max_entities = kDefaultMaxEntities);
std::vector<Scene> scenes_from_json(const nlohmann::json& j,
                                    const AttributeSchema& schema,
                                    size_t max_entities = kDefaultMaxEntities);

void save_scenes(const std::string& path, const std::vector<Scene>& scenes,
                 const AttributeSchema& schema);
nlohmann::json scenes_to_json(const std::vector<Scene>& scenes,
                              const AttributeSchema& schema);

// The on-disk key for a dimension ("colour" is stored as "color").
std::string file_key_for_dimension(const std::string& dimension);

}  // namespace vds

#endif  // VDS_SCENE_IO_HPP_
