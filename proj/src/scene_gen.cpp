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

#include "vds/scene_gen.hpp"

#include <algorithm>

#include "vds/error.hpp"
#include "vds/rng.hpp"

namespace vds {
namespace {

// Resolves the allowed value lists per dimension, validating the config.
std::vector<std::vector<std::string>> resolve_allowed(
    const AttributeSchema& schema, const SceneGenConfig& cfg) {
  std::vector<std::vector<std::string>> allowed;
  for (size_t d = 0; d < schema.dimension_count(); ++d) {
    allowed.push_back(schema.values(d));
  }
  for (const auto& [dim, values] : cfg.allowed_values) {
    auto di = schema.dimension_index(dim);
    if (!di) throw SchemaError("unknown dimension '" + dim + "' in config");
    if (values.empty()) {
      throw SchemaError("empty allowed-value set for dimension '" + dim + "'");
    }
    for (const std::string& v : values) {
      auto vd = schema.value_dimension(v);
      if (!vd || *vd != *di) {
        throw SchemaError("value '" + v + "' is not valid for dimension '" +
                          dim + "'");
      }
    }
    allowed[*di] = values;
  }
  return allowed;
}

double z_for(const AttributeSchema& schema, const Entity& e) {
  auto size_dim = schema.dimension_index("size");
  if (size_dim && e.attributes[*size_dim] == "small") return 0.35;
  if (size_dim) return 0.7;
  return 0.35;
}

}  // namespace

Scene generate_scene(const AttributeSchema& schema, const SceneGenConfig& cfg,
                     uint64_t seed, int scene_id) {
  if (cfg.n_objects < 1) {
    throw GenerationError("n_objects must be at least 1");
  }
  const auto allowed = resolve_allowed(schema, cfg);
  Rng rng(seed);

  // Enumerate the distinct attribute tuples (as per-dimension value indices)
  // and deal them out shuffled; reshuffle a fresh deck when exhausted.
  size_t tuple_count = 1;
  for (const auto& vs : allowed) {
    tuple_count *= vs.size();
    if (tuple_count > 1u << 20) break;  // plenty; avoid pointless blowup
  }
  std::vector<size_t> deck;
  auto deal = [&]() -> size_t {
    if (deck.empty()) {
      deck.resize(std::min<size_t>(tuple_count, 1u << 20));
      for (size_t i = 0; i < deck.size(); ++i) deck[i] = i;
      rng.shuffle(&deck);
    }
    size_t t = deck.back();
    deck.pop_back();
    return t;
  };

  Scene scene;
  scene.id = scene_id;
  int attempts = 0;
  for (int i = 0; i < cfg.n_objects; ++i) {
    Entity e;
    e.index = i;
    size_t t = deal();
    for (const auto& vs : allowed) {
      e.attributes.push_back(vs[t % vs.size()]);
      t /= vs.size();
    }
    for (;;) {
      if (++attempts > cfg.max_attempts) {
        throw GenerationError(
            "cannot place " + std::to_string(cfg.n_objects) +
            " objects with min distance " +
            std::to_string(cfg.min_pairwise_distance) + " after " +
            std::to_string(cfg.max_attempts) + " attempts");
      }
      const double r = cfg.region_half_extent;
      e.coords = {rng.uniform(-r, r), rng.uniform(-r, r), 0.0};
      bool clear = true;
      for (const Entity& other : scene.entities) {
        if (xy_distance(e.coords, other.coords) < cfg.min_pairwise_distance) {
          clear = false;
          break;
        }
      }
      if (clear) break;
    }
    e.coords.z = z_for(schema, e);
    scene.entities.push_back(std::move(e));
  }
  validate_scene(scene, schema, std::max<size_t>(kDefaultMaxEntities,
                                                 scene.entities.size()));
  return scene;
}

}  // namespace vds
