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

#include "vds/kb.hpp"

#include <algorithm>
#include <sstream>

#include "vds/error.hpp"

namespace vds {

KbUpdate KbUpdate::handle(int entity, size_t dimension, std::string value) {
  KbUpdate u;
  u.kind = Kind::kHandle;
  u.entity = entity;
  u.dimension = dimension;
  u.value = std::move(value);
  return u;
}

KbUpdate KbUpdate::subject(int entity) {
  KbUpdate u;
  u.kind = Kind::kSubject;
  u.entity = entity;
  return u;
}

KbUpdate KbUpdate::seen(int entity, AttrMap known) {
  KbUpdate u;
  u.kind = Kind::kSeen;
  u.entity = entity;
  u.known = std::move(known);
  return u;
}

KbUpdate KbUpdate::group(std::vector<int> members) {
  KbUpdate u;
  u.kind = Kind::kGroup;
  u.members = std::move(members);
  return u;
}

KnowledgeBase::KnowledgeBase(const Scene& scene, const AttributeSchema& schema)
    : scene_(&scene), schema_(&schema) {}

void KnowledgeBase::mark_caption_executed(bool ambiguous) {
  caption_executed_ = true;
  caption_ambiguous_ = ambiguous;
}

const SeenRecord* KnowledgeBase::record(int entity) const {
  for (const SeenRecord& r : seen_) {
    if (r.entity == entity) return &r;
  }
  return nullptr;
}

int KnowledgeBase::fetch(const AttrMap& constraints) const {
  if (constraints.empty()) {
    throw FetchError("fetch requires at least one attribute constraint");
  }
  for (const auto& [dim, value] : constraints) {
    if (dim >= schema_->dimension_count()) {
      throw FetchError("fetch constraint uses unknown attribute dimension");
    }
    if (!schema_->is_value_of(dim, value)) {
      throw FetchError("fetch constraint value '" + value +
                       "' is not valid for dimension '" +
                       schema_->dimension(dim) + "'");
    }
  }
  ++fetch_count_;
  for (const SeenRecord& r : seen_) {
    bool ok = true;
    for (const auto& [dim, value] : constraints) {
      auto it = r.known.find(dim);
      if (it == r.known.end() || it->second != value) {
        ok = false;
        break;
      }
    }
    if (ok) return r.entity;
  }
  throw FetchError("no mentioned entity matches the given attributes");
}

namespace {

void check_entity(const Scene& scene, int entity, const char* what) {
  if (entity < 0 || entity >= scene.entity_count()) {
    throw ExecutionStateError(std::string(what) +
                              " references entity index out of range");
  }
}

}  // namespace

void KnowledgeBase::apply(const KbUpdate& update, const KbMask& mask) {
  switch (update.kind) {
    case KbUpdate::Kind::kHandle: {
      if (!mask.handle) {
        throw MaskViolationError(
            "handle update attempted by a function whose mask forbids it");
      }
      check_entity(*scene_, update.entity, "handle update");
      SeenRecord* rec = nullptr;
      for (SeenRecord& r : seen_) {
        if (r.entity == update.entity) {
          rec = &r;
          break;
        }
      }
      if (rec == nullptr) {
        throw ExecutionStateError(
            "handle update targets an entity that was never mentioned");
      }
      if (update.dimension >= schema_->dimension_count()) {
        throw ExecutionStateError("handle update uses unknown dimension");
      }
      const Entity& ent = scene_->entities[update.entity];
      if (ent.attributes[update.dimension] != update.value) {
        throw ExecutionStateError(
            "handle update would record a value the entity does not have");
      }
      auto it = rec->known.find(update.dimension);
      if (it != rec->known.end()) {
        if (it->second != update.value) {
          throw ExecutionStateError(
              "handle update conflicts with previously recorded value");
        }
        return;  // already known: no-op
      }
      rec->known.emplace(update.dimension, update.value);
      rec->handle.push_back(update.value);
      return;
    }
    case KbUpdate::Kind::kSubject: {
      if (!mask.conv_subject) {
        throw MaskViolationError(
            "subject update attempted by a function whose mask forbids it");
      }
      check_entity(*scene_, update.entity, "subject update");
      if (record(update.entity) == nullptr) {
        throw ExecutionStateError(
            "subject update promotes an entity that was never mentioned");
      }
      if (subject_.has_value() && *subject_ == update.entity) return;
      prev_subject_ = subject_;
      subject_ = update.entity;
      return;
    }
    case KbUpdate::Kind::kSeen: {
      if (!mask.seen) {
        throw MaskViolationError(
            "seen update attempted by a function whose mask forbids it");
      }
      check_entity(*scene_, update.entity, "seen update");
      if (record(update.entity) != nullptr) return;  // already seen: no-op
      const Entity& ent = scene_->entities[update.entity];
      SeenRecord rec;
      rec.entity = update.entity;
      rec.first_mention_round = round_;
      for (const auto& [dim, value] : update.known) {
        if (dim >= schema_->dimension_count()) {
          throw ExecutionStateError("seen update uses unknown dimension");
        }
        if (ent.attributes[dim] != value) {
          throw ExecutionStateError(
              "seen update would record a value the entity does not have");
        }
        rec.known.emplace(dim, value);
        rec.handle.push_back(value);
      }
      seen_.push_back(std::move(rec));
      return;
    }
    case KbUpdate::Kind::kGroup: {
      if (!mask.groups) {
        throw MaskViolationError(
            "group update attempted by a function whose mask forbids it");
      }
      std::vector<int> members = update.members;
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()),
                    members.end());
      for (int e : members) check_entity(*scene_, e, "group update");
      group_ = Group{std::move(members), round_};
      return;
    }
  }
  throw ExecutionStateError("unknown update kind");
}

std::string KnowledgeBase::dump() const {
  std::ostringstream out;
  out << "round: " << round_ << "\n";
  out << "caption: "
      << (caption_executed_ ? (caption_ambiguous_ ? "executed (ambiguous)"
                                                  : "executed")
                            : "not executed")
      << "\n";
  auto name = [&](const std::optional<int>& e) -> std::string {
    if (!e.has_value()) return "-";
    std::string s = "#" + std::to_string(*e);
    const SeenRecord* r = record(*e);
    if (r != nullptr && !r->handle.empty()) {
      s += " [";
      for (size_t i = 0; i < r->handle.size(); ++i) {
        if (i > 0) s += " ";
        s += r->handle[i];
      }
      s += "]";
    }
    return s;
  };
  out << "subject: " << name(subject_) << "\n";
  out << "prev_subject: " << name(prev_subject_) << "\n";
  out << "group: ";
  if (!group_.has_value()) {
    out << "-\n";
  } else {
    out << "{";
    for (size_t i = 0; i < group_->members.size(); ++i) {
      if (i > 0) out << ", ";
      out << "#" << group_->members[i];
    }
    out << "} (round " << group_->created_round << ")\n";
  }
  out << "seen (" << seen_.size() << "):\n";
  for (const SeenRecord& r : seen_) {
    out << "  #" << r.entity << " round=" << r.first_mention_round
        << " handle=[";
    for (size_t i = 0; i < r.handle.size(); ++i) {
      if (i > 0) out << " ";
      out << r.handle[i];
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace vds
