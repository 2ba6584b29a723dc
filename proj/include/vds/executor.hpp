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

#ifndef VDS_EXECUTOR_HPP_
#define VDS_EXECUTOR_HPP_

#include <string>

#include "vds/dsl.hpp"
#include "vds/kb.hpp"
#include "vds/scene.hpp"

namespace vds {

// Token answers of seek questions when a relational reference points at
// nothing ("What colour is the thing left of it?" with nothing to the left).
inline constexpr const char* kNoneToken = "none";

struct Answer {
  enum class Type { kNumber, kYesNo, kAttribute, kNoneToken };
  Type type = Type::kNoneToken;
  int number = 0;
  bool yes = false;
  std::string value;

  static Answer of_number(int n);
  static Answer of_yes_no(bool b);
  static Answer of_attribute(std::string v);
  static Answer none_token();

  // Serialized form used in datasets and answer comparison: "0".."N",
  // "yes"/"no", the attribute value, or the none token.
  std::string str() const;

  friend bool operator==(const Answer&, const Answer&) = default;
};

struct CaptionResult {
  // True when the caption's referent was not unique in the scene and a
  // deterministic tie-break chose one reading (extreme within eps of a rival,
  // unique-obj matching several entities, obj-relation with several pairs).
  bool ambiguous = false;
};

KnowledgeBase init_kb(const Scene& scene, const AttributeSchema& schema);

// Seeds the KB from a caption program. Requires round 0 and no prior caption.
// Throws NoReferentError when the scene has no entity satisfying the caption.
CaptionResult execute_caption(KnowledgeBase& kb, const Program& p);

// Answers one question program and applies its mask-gated KB updates. The
// caller advances the round counter (kb.begin_round()) once per question.
Answer execute_question(KnowledgeBase& kb, const Program& p);

// The entity a question is about: the subject for imm forms, the previous
// subject for imm2, the fetch hit for early forms, -1 for questions with no
// entity referent. Pure apart from the fetch counter; throws the same
// resolution errors execute_question would.
int referent_of(KnowledgeBase& kb, const Program& p);

}  // namespace vds

#endif  // VDS_EXECUTOR_HPP_
