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

#include <cstdio>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "vds/error.hpp"
#include "vds/rng.hpp"
#include "vds/scene.hpp"
#include "vds/scene_gen.hpp"
#include "vds/scene_io.hpp"

using namespace vds;
using vds::testing::make_scene;

namespace {

const AttributeSchema& schema() { return AttributeSchema::default_schema(); }

Scene random_scene(uint64_t seed, int n_objects) {
  SceneGenConfig cfg;
  cfg.n_objects = n_objects;
  return generate_scene(schema(), cfg, seed, static_cast<int>(seed % 1000));
}

}  // namespace

TEST_CASE("relates agrees with an independent projection oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    Scene s = random_scene(rng.next(), 3 + static_cast<int>(rng.below(8)));
    for (int a = 0; a < s.entity_count(); ++a) {
      for (int b = 0; b < s.entity_count(); ++b) {
        if (a == b) continue;
        for (Position pos : kAllPositions) {
          CAPTURE(a);
          CAPTURE(b);
          REQUIRE(relates(s, a, b, pos) ==
                  vds::testing::oracle_relates(s, a, b, pos));
        }
      }
    }
  }
}

TEST_CASE("relates is antisymmetric and pairs with the opposite direction") {
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    Scene s = random_scene(rng.next(), 4 + static_cast<int>(rng.below(6)));
    for (int a = 0; a < s.entity_count(); ++a) {
      for (int b = 0; b < s.entity_count(); ++b) {
        if (a == b) continue;
        CHECK_FALSE(relates(s, a, a, Position::kRight));
        for (Position pos : kAllPositions) {
          // Never both ways along one axis.
          bool both_ways = relates(s, a, b, pos) && relates(s, b, a, pos);
          CHECK_FALSE(both_ways);
        }
        // Default directions are negated pairs: strictly right of b means b
        // is strictly left of a.
        if (relates(s, a, b, Position::kRight)) {
          CHECK(relates(s, b, a, Position::kLeft));
        }
        if (relates(s, a, b, Position::kFront)) {
          CHECK(relates(s, b, a, Position::kBehind));
        }
      }
    }
  }
}

TEST_CASE("extreme_directional matches a brute-force argmax with tie flag") {
  Rng rng(103);
  for (int trial = 0; trial < 80; ++trial) {
    Scene s = random_scene(rng.next(), 3 + static_cast<int>(rng.below(8)));
    std::vector<int> candidates;
    for (int e = 0; e < s.entity_count(); ++e) {
      if (rng.below(3) != 0) candidates.push_back(e);
    }
    if (candidates.empty()) candidates.push_back(0);
    for (Position pos : kAllPositions) {
      ExtremePick pick = extreme_directional(s, candidates, pos);
      const Vec3& d = s.direction(pos);
      int best = -1;
      double best_proj = 0.0;
      for (int e : candidates) {
        const Vec3& p = s.entities[e].coords;
        double proj = p.x * d.x + p.y * d.y + p.z * d.z;
        if (best < 0 || proj > best_proj) {
          best = e;
          best_proj = proj;
        }
      }
      bool tie = false;
      for (int e : candidates) {
        if (e == best) continue;
        const Vec3& p = s.entities[e].coords;
        double proj = p.x * d.x + p.y * d.y + p.z * d.z;
        if (best_proj - proj <= kSpatialEps) tie = true;
      }
      CAPTURE(trial);
      REQUIRE(pick.entity == best);
      REQUIRE(pick.tied == tie);
    }
  }
}

TEST_CASE("extreme_centre measures distance to the centroid of all entities") {
  // Candidates exclude the entity dead-centre; the nearest *candidate* wins.
  Scene s = make_scene({{"small", "red", "rubber", "cube", 0.0, 0.0},
                        {"small", "blue", "rubber", "cube", 1.0, 0.0},
                        {"small", "green", "rubber", "cube", -1.0, 0.0},
                        {"large", "red", "metal", "sphere", 0.0, 4.0}});
  // Centroid xy = (0, 1). Among candidates {1, 2} both are at distance
  // sqrt(2); the tie resolves to the lowest index and is flagged.
  ExtremePick pick = extreme_centre(s, {1, 2});
  CHECK(pick.entity == 1);
  CHECK(pick.tied);
  // With a single candidate there is nothing to tie with.
  pick = extreme_centre(s, {3});
  CHECK(pick.entity == 3);
  CHECK_FALSE(pick.tied);
}

TEST_CASE("extremes are invariant under translating every entity") {
  Rng rng(104);
  for (int trial = 0; trial < 30; ++trial) {
    Scene s = random_scene(rng.next(), 5);
    Scene shifted = s;
    Vec3 delta{rng.real01() * 10 - 5, rng.real01() * 10 - 5, 0.0};
    for (Entity& e : shifted.entities) e.coords = e.coords + delta;
    std::vector<int> all;
    for (int e = 0; e < s.entity_count(); ++e) all.push_back(e);
    for (Position pos : kAllPositions) {
      CHECK(extreme_directional(s, all, pos).entity ==
            extreme_directional(shifted, all, pos).entity);
      for (int a = 0; a < s.entity_count(); ++a) {
        for (int b = 0; b < s.entity_count(); ++b) {
          if (a != b) CHECK(relates(s, a, b, pos) == relates(shifted, a, b, pos));
        }
      }
    }
    CHECK(extreme_centre(s, all).entity ==
          extreme_centre(shifted, all).entity);
  }
}

TEST_CASE("extreme over an empty candidate set raises") {
  Scene s = random_scene(7, 4);
  CHECK_THROWS_AS(extreme_directional(s, {}, Position::kLeft),
                  EmptyCandidatesError);
  CHECK_THROWS_AS(extreme_centre(s, {}), EmptyCandidatesError);
}

TEST_CASE("filter_by_attrs narrows monotonically and returns ascending ids") {
  Rng rng(105);
  for (int trial = 0; trial < 40; ++trial) {
    Scene s = random_scene(rng.next(), 6 + static_cast<int>(rng.below(5)));
    AttrMap constraints;
    std::vector<int> prev = filter_by_attrs(s, schema(), constraints);
    CHECK(prev.size() == static_cast<size_t>(s.entity_count()));
    for (size_t d = 0; d < schema().dimension_count(); ++d) {
      const auto& values = schema().values(d);
      constraints[d] = values[rng.below(values.size())];
      std::vector<int> now = filter_by_attrs(s, schema(), constraints);
      CHECK(now.size() <= prev.size());
      CHECK(std::is_sorted(now.begin(), now.end()));
      for (int e : now) {
        CHECK(s.entities[e].attribute(d) == constraints[d]);
        CHECK(std::count(prev.begin(), prev.end(), e) == 1);
      }
      prev = now;
    }
  }
}

TEST_CASE("constraints_from_values rejects unknown and same-dimension values") {
  CHECK_THROWS_AS(constraints_from_values(schema(), {"mauve"}), SchemaError);
  CHECK_THROWS_AS(constraints_from_values(schema(), {"red", "blue"}),
                  SchemaError);
  AttrMap m = constraints_from_values(schema(), {"cube", "red", "small"});
  REQUIRE(m.size() == 3);
  CHECK(m.at(0) == "small");
  CHECK(m.at(1) == "red");
  CHECK(m.at(3) == "cube");
}

TEST_CASE("validate_scene rejects structural violations") {
  Scene s = make_scene({{"small", "red", "rubber", "cube", 0, 0}});
  CHECK_NOTHROW(validate_scene(s, schema()));

  Scene empty;
  CHECK_THROWS_AS(validate_scene(empty, schema()), SchemaError);

  Scene bad_value = s;
  bad_value.entities[0].attributes[1] = "taupe";
  CHECK_THROWS_AS(validate_scene(bad_value, schema()), SchemaError);

  Scene bad_index = s;
  bad_index.entities[0].index = 5;
  CHECK_THROWS_AS(validate_scene(bad_index, schema()), SchemaError);

  Scene bad_dirs = s;
  bad_dirs.directions[static_cast<size_t>(Position::kLeft)] = {1, 0, 0};
  CHECK_THROWS_AS(validate_scene(bad_dirs, schema()), SchemaError);

  Scene too_many = s;
  for (int i = 1; i <= 20; ++i) {
    Entity e = s.entities[0];
    e.index = i;
    too_many.entities.push_back(e);
  }
  CHECK_THROWS_AS(validate_scene(too_many, schema()), SchemaError);
}

TEST_CASE("scene generation is deterministic and respects its config") {
  SceneGenConfig cfg;
  cfg.n_objects = 8;
  Scene a = generate_scene(schema(), cfg, 42, 3);
  Scene b = generate_scene(schema(), cfg, 42, 3);
  REQUIRE(a.entity_count() == 8);
  CHECK(a.id == 3);
  for (int i = 0; i < 8; ++i) {
    CHECK(a.entities[i].attributes == b.entities[i].attributes);
    CHECK(a.entities[i].coords.x == b.entities[i].coords.x);
    CHECK(a.entities[i].coords.y == b.entities[i].coords.y);
  }
  Scene c = generate_scene(schema(), cfg, 43, 3);
  bool any_difference = false;
  for (int i = 0; i < 8; ++i) {
    if (a.entities[i].attributes != c.entities[i].attributes ||
        a.entities[i].coords.x != c.entities[i].coords.x) {
      any_difference = true;
    }
  }
  CHECK(any_difference);
}

TEST_CASE("generated scenes validate, keep min distance, favour distinct tuples") {
  Rng rng(106);
  for (int trial = 0; trial < 30; ++trial) {
    SceneGenConfig cfg;
    cfg.n_objects = 3 + static_cast<int>(rng.below(10));
    Scene s = generate_scene(schema(), cfg, rng.next(), trial);
    CHECK_NOTHROW(validate_scene(s, schema()));
    std::set<std::vector<std::string>> tuples;
    for (const Entity& e : s.entities) tuples.insert(e.attributes);
    // 96 distinct tuples exist, far more than any generated scene needs.
    CHECK(tuples.size() == s.entities.size());
    for (int a = 0; a < s.entity_count(); ++a) {
      for (int b = a + 1; b < s.entity_count(); ++b) {
        CHECK(xy_distance(s.entities[a].coords, s.entities[b].coords) >=
              cfg.min_pairwise_distance);
      }
    }
  }
}

TEST_CASE("scene generation honours value restrictions") {
  SceneGenConfig cfg;
  cfg.n_objects = 6;
  cfg.allowed_values["colour"] = {"grey", "red", "blue"};
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    Scene s = generate_scene(schema(), cfg, rng.next(), trial);
    for (const Entity& e : s.entities) {
      std::string c = e.attribute(1);
      CHECK((c == "grey" || c == "red" || c == "blue"));
    }
  }
}

TEST_CASE("scene files round-trip through save and load") {
  Rng rng(108);
  std::vector<Scene> scenes;
  for (int i = 0; i < 5; ++i) {
    SceneGenConfig cfg;
    cfg.n_objects = 3 + static_cast<int>(rng.below(6));
    scenes.push_back(generate_scene(schema(), cfg, rng.next(), i));
  }
  const std::string path = "scene_roundtrip_test.json";
  save_scenes(path, scenes, schema());
  std::vector<Scene> loaded = load_scenes(path, schema());
  std::remove(path.c_str());
  REQUIRE(loaded.size() == scenes.size());
  for (size_t i = 0; i < scenes.size(); ++i) {
    CHECK(loaded[i].id == scenes[i].id);
    REQUIRE(loaded[i].entity_count() == scenes[i].entity_count());
    for (int e = 0; e < scenes[i].entity_count(); ++e) {
      CHECK(loaded[i].entities[e].attributes == scenes[i].entities[e].attributes);
      CHECK(loaded[i].entities[e].coords.x ==
            doctest::Approx(scenes[i].entities[e].coords.x));
      CHECK(loaded[i].entities[e].coords.y ==
            doctest::Approx(scenes[i].entities[e].coords.y));
    }
  }
}

TEST_CASE("scene loader speaks the color/colour key convention") {
  const std::string path = "scene_color_key_test.json";
  {
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fputs(R"({"scenes": [{"image_index": 7, "objects": [
      {"color": "red", "size": "small", "shape": "cube",
       "material": "rubber", "3d_coords": [1.0, 2.0, 0.35],
       "pixel_coords": [12, 34]}]}]})",
          f);
    fclose(f);
  }
  std::vector<Scene> loaded = load_scenes(path, schema());
  std::remove(path.c_str());
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].id == 7);
  REQUIRE(loaded[0].entity_count() == 1);
  CHECK(loaded[0].entities[0].attribute(1) == "red");
  CHECK(loaded[0].entities[0].coords.y == doctest::Approx(2.0));
}
