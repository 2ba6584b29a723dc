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

#ifndef VDS_KB_HPP_
#define VDS_KB_HPP_

#include <optional>
#include <string>
#include <vector>

#include "vds/dsl.hpp"
#include "vds/scene.hpp"

namespace vds {

// One entity the dialog has mentioned. The handle is the ordered list of
// attribute values by which the entity is known so far: values present at
// creation come first (canonical dimension order), later-revealed values are
// appended in discovery order.
struct SeenRecord {
  int entity = -1;
  std::vector<std::string> handle;
  AttrMap known;
  int first_mention_round = 0;
};

// The most recent entity set established by a counting/existence question.
struct Group {
  std::vector<int> members;  // ascending entity indices; may be empty
  int created_round = 0;

  friend bool operator==(const Group&, const Group&) = default;
};

// One of the four knowledge-base update kinds, as data so tests can drive
// updates directly.
struct KbUpdate {
  enum class Kind { kHandle, kSubject, kSeen, kGroup };
  Kind kind;
  int entity = -1;           // kHandle, kSubject, kSeen
  size_t dimension = 0;      // kHandle
  std::string value;         // kHandle
  AttrMap known;             // kSeen
  std::vector<int> members;  // kGroup

  static KbUpdate handle(int entity, size_t dimension, std::string value);
  static KbUpdate subject(int entity);
  static KbUpdate seen(int entity, AttrMap known);
  static KbUpdate group(std::vector<int> members);
};

// The dialog-state machine: which entities have been mentioned (with what
// handles), the current and previous conversation subjects, the active
// group, and the round counter. Copyable, so speculative execution clones
// cheaply; single-owner mutable (no concurrent mutation).
class KnowledgeBase {
 public:
  KnowledgeBase(const Scene& scene, const AttributeSchema& schema);

  const Scene& scene() const { return *scene_; }
  const AttributeSchema& schema() const { return *schema_; }

  int round() const { return round_; }
  void begin_round() { ++round_; }

  bool caption_executed() const { return caption_executed_; }
  bool caption_ambiguous() const { return caption_ambiguous_; }
  void mark_caption_executed(bool ambiguous);

  const std::vector<SeenRecord>& seen() const { return seen_; }
  const SeenRecord* record(int entity) const;
  bool is_seen(int entity) const { return record(entity) != nullptr; }

  std::optional<int> subject() const { return subject_; }
  std::optional<int> prev_subject() const { return prev_subject_; }
  const std::optional<Group>& group() const { return group_; }

  // Earliest-mentioned seen record whose known attributes satisfy all
  // constraints. Matching is against established knowledge, not the scene:
  // an entity whose colour was never mentioned does not match a colour
  // constraint even if it happens to have that colour.
  int fetch(const AttrMap& constraints) const;
  long long fetch_count() const { return fetch_count_; }

  // Applies one update, enforcing the executing function's mask. Updates are
  // idempotent where the semantics call for it: re-seeing a seen entity and
  // re-appending a known value are no-ops.
  void apply(const KbUpdate& update, const KbMask& mask);

  // Human-readable state for the CLI and REPL.
  std::string dump() const;

 private:
  const Scene* scene_;
  const AttributeSchema* schema_;
  std::vector<SeenRecord> seen_;
  std::optional<int> subject_;
  std::optional<int> prev_subject_;
  std::optional<Group> group_;
  int round_ = 0;
  bool caption_executed_ = false;
  bool caption_ambiguous_ = false;
  mutable long long fetch_count_ = 0;
};

}  // namespace vds

#endif  // VDS_KB_HPP_
