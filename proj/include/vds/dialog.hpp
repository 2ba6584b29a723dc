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

#ifndef VDS_DIALOG_HPP_
#define VDS_DIALOG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vds/dsl.hpp"
#include "vds/schema.hpp"

namespace vds {

// How a question relates to the dialog history: standalone (none), dependent
// on everything said so far (all), or referring to an entity first mentioned
// a fixed number of rounds ago (the caption counts as round 0).
struct CorefLabel {
  enum class Kind { kNone, kAll, kDistance };
  Kind kind = Kind::kNone;
  int distance = 0;  // >= 1 when kind == kDistance

  static CorefLabel none() { return {}; }
  static CorefLabel all() { return {Kind::kAll, 0}; }
  static CorefLabel dist(int d) { return {Kind::kDistance, d}; }

  std::string str() const {
    switch (kind) {
      case Kind::kNone:
        return "none";
      case Kind::kAll:
        return "all";
      case Kind::kDistance:
        return std::to_string(distance);
    }
    return "none";
  }

  friend bool operator==(const CorefLabel&, const CorefLabel&) = default;
};

struct Round {
  std::string question;
  Program program;
  std::string answer;  // serialized Answer
  std::string question_type;
  CorefLabel coref;

  friend bool operator==(const Round&, const Round&) = default;
};

struct Dialog {
  int scene_id = 0;
  uint64_t seed = 0;
  bool ambiguous_caption = false;
  std::string caption;
  Program caption_program;
  std::vector<Round> rounds;

  friend bool operator==(const Dialog&, const Dialog&) = default;
};

struct Dataset {
  AttributeSchema schema;
  std::vector<Dialog> dialogs;
};

}  // namespace vds

#endif  // VDS_DIALOG_HPP_
