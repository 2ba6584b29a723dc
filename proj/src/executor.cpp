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

#include "vds/executor.hpp"

#include <algorithm>
#include <set>

#include "vds/error.hpp"

namespace vds {

Answer Answer::of_number(int n) {
  Answer a;
  a.type = Type::kNumber;
  a.number = n;
  return a;
}

Answer Answer::of_yes_no(bool b) {
  Answer a;
  a.type = Type::kYesNo;
  a.yes = b;
  return a;
}

Answer Answer::of_attribute(std::string v) {
  Answer a;
  a.type = Type::kAttribute;
  a.value = std::move(v);
  return a;
}

Answer Answer::none_token() { return Answer{}; }

std::string Answer::str() const {
  switch (type) {
    case Type::kNumber:
      return std::to_string(number);
    case Type::kYesNo:
      return yes ? "yes" : "no";
    case Type::kAttribute:
      return value;
    case Type::kNoneToken:
      return kNoneToken;
  }
  return kNoneToken;
}

KnowledgeBase init_kb(const Scene& scene, const AttributeSchema& schema) {
  validate_scene(scene, schema);
  return KnowledgeBase(scene, schema);
}

namespace {

size_t dimension_of_value(const AttributeSchema& schema,
                          const std::string& value) {
  auto dim = schema.value_dimension(value);
  if (!dim) {
    throw ArgumentError("'" + value + "' is not an attribute value");
  }
  return *dim;
}

Position position_arg(const std::string& token) {
  auto pos = parse_position(token);
  if (!pos) throw ArgumentError("'" + token + "' is not a position");
  return *pos;
}

int require_subject(const KnowledgeBase& kb, const FunctionSignature& sig) {
  auto s = kb.subject();
  if (!s) {
    throw MissingSubjectError("'" + sig.name +
                              "' needs a conversation subject, but none is "
                              "established");
  }
  return *s;
}

int require_prev_subject(const KnowledgeBase& kb,
                         const FunctionSignature& sig) {
  auto s = kb.prev_subject();
  if (!s) {
    throw MissingSubjectError("'" + sig.name +
                              "' needs a previous conversation subject, but "
                              "the subject never changed");
  }
  return *s;
}

const Group& require_group(const KnowledgeBase& kb,
                           const FunctionSignature& sig) {
  if (!kb.group().has_value()) {
    throw NoActiveGroupError("'" + sig.name +
                             "' needs an active group, but no "
                             "group-establishing question came before");
  }
  return *kb.group();
}

// Resolves the entity a question talks about: the subject for imm, the
// previous subject for imm2, a knowledge-base fetch by the trailing attribute
// argument for early forms.
int resolve_referent(KnowledgeBase& kb, const FunctionSignature& sig,
                     const Program& p) {
  switch (sig.ref) {
    case RefMode::kSubject:
      return require_subject(kb, sig);
    case RefMode::kPrevSubject:
      return require_prev_subject(kb, sig);
    case RefMode::kFetch: {
      const std::string& attr = p.args.back();
      AttrMap constraints{{dimension_of_value(kb.schema(), attr), attr}};
      return kb.fetch(constraints);
    }
    case RefMode::kNone:
      break;
  }
  return -1;
}

std::vector<int> related_entities(const Scene& scene, int referent,
                                  Position pos) {
  std::vector<int> out;
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (e != referent && relates(scene, e, referent, pos)) out.push_back(e);
  }
  return out;
}

std::vector<int> same_attribute_entities(const Scene& scene, int referent,
                                         size_t dim) {
  std::vector<int> out;
  const std::string& v = scene.entities[referent].attribute(dim);
  for (int e = 0; e < scene.entity_count(); ++e) {
    if (e != referent && scene.entities[e].attribute(dim) == v)
      out.push_back(e);
  }
  return out;
}

std::vector<int> unseen_entities(const KnowledgeBase& kb) {
  std::vector<int> out;
  for (int e = 0; e < kb.scene().entity_count(); ++e) {
    if (!kb.is_seen(e)) out.push_back(e);
  }
  return out;
}

std::vector<int> all_entities(const Scene& scene) {
  std::vector<int> out(scene.entity_count());
  for (int e = 0; e < scene.entity_count(); ++e) out[e] = e;
  return out;
}

void promote(KnowledgeBase& kb, const KbMask& mask, int entity,
             const AttrMap& known) {
  kb.apply(KbUpdate::seen(entity, known), mask);
  kb.apply(KbUpdate::subject(entity), mask);
}

// Relational/exclusion result sets: a lone member becomes the new subject
// (when the mask lets the function move the subject); otherwise the set
// becomes the active group (when the mask allows groups).
void singleton_or_group(KnowledgeBase& kb, const FunctionSignature& sig,
                        const std::vector<int>& members) {
  if (members.size() == 1 && sig.mask.conv_subject) {
    promote(kb, sig.mask, members[0], {});
    return;
  }
  if (sig.mask.groups) kb.apply(KbUpdate::group(members), sig.mask);
}

// Records an attribute value the dialog just revealed about an entity:
// appended to the handle when the entity is already known, otherwise folded
// into the new record's creation-time knowledge.
void reveal(KnowledgeBase& kb, const KbMask& mask, int entity,
            AttrMap values) {
  if (kb.is_seen(entity)) {
    for (const auto& [dim, value] : values) {
      kb.apply(KbUpdate::handle(entity, dim, value), mask);
    }
  } else {
    kb.apply(KbUpdate::seen(entity, std::move(values)), mask);
  }
}

int nearest_in_direction(const Scene& scene, int referent,
                         const std::vector<int>& candidates) {
  int best = -1;
  double best_d = 0.0;
  for (int e : candidates) {
    double d = xy_distance(scene.entities[e].coords,
                           scene.entities[referent].coords);
    if (best == -1 || d < best_d) {
      best = e;
      best_d = d;
    }
  }
  return best;
}

Answer seek_relational(KnowledgeBase& kb, const FunctionSignature& sig,
                       int referent, size_t dim_t, Position pos) {
  std::vector<int> candidates = related_entities(kb.scene(), referent, pos);
  if (candidates.empty()) return Answer::none_token();
  int e = nearest_in_direction(kb.scene(), referent, candidates);
  const std::string& v = kb.scene().entities[e].attribute(dim_t);
  reveal(kb, sig.mask, e, AttrMap{{dim_t, v}});
  kb.apply(KbUpdate::subject(e), sig.mask);
  return Answer::of_attribute(v);
}

}  // namespace

int referent_of(KnowledgeBase& kb, const Program& p) {
  return resolve_referent(kb, Registry::instance().at(p.name), p);
}

CaptionResult execute_caption(KnowledgeBase& kb, const Program& p) {
  const FunctionSignature& sig = Registry::instance().at(p.name);
  if (sig.kind != FunctionKind::kCaption) {
    throw ArgumentError("'" + sig.name + "' is not a caption function");
  }
  if (kb.round() != 0 || kb.caption_executed()) {
    throw ExecutionStateError(
        "captions execute exactly once, at round 0, before any question");
  }
  validate_program(p, kb.schema());
  const Scene& scene = kb.scene();
  const AttributeSchema& schema = kb.schema();
  CaptionResult result;

  switch (sig.id) {
    case Fn::kCountAtt: {
      const std::string& attr = p.args[0];
      size_t dim = dimension_of_value(schema, attr);
      std::vector<int> members = filter_by_values(scene, schema, {attr});
      if (members.empty()) {
        throw NoReferentError("no entity in the scene is '" + attr + "'");
      }
      for (int e : members) {
        kb.apply(KbUpdate::seen(e, AttrMap{{dim, attr}}), sig.mask);
      }
      kb.apply(KbUpdate::group(members), sig.mask);
      break;
    }
    case Fn::kExtremeRight:
    case Fn::kExtremeLeft:
    case Fn::kExtremeBehind:
    case Fn::kExtremeFront:
    case Fn::kExtremeCentre: {
      AttrMap constraints = constraints_from_values(schema, p.args);
      std::vector<int> candidates = filter_by_attrs(scene, schema, constraints);
      if (candidates.empty()) {
        throw NoReferentError("no entity in the scene matches the caption '" +
                              serialize_program(p) + "'");
      }
      ExtremePick pick;
      switch (sig.id) {
        case Fn::kExtremeRight:
          pick = extreme_directional(scene, candidates, Position::kRight);
          break;
        case Fn::kExtremeLeft:
          pick = extreme_directional(scene, candidates, Position::kLeft);
          break;
        case Fn::kExtremeBehind:
          pick = extreme_directional(scene, candidates, Position::kBehind);
          break;
        case Fn::kExtremeFront:
          pick = extreme_directional(scene, candidates, Position::kFront);
          break;
        default:
          pick = extreme_centre(scene, candidates);
          break;
      }
      result.ambiguous = pick.tied;
      kb.apply(KbUpdate::seen(pick.entity, constraints), sig.mask);
      kb.apply(KbUpdate::subject(pick.entity), sig.mask);
      break;
    }
    case Fn::kUniqueObj: {
      AttrMap constraints = constraints_from_values(schema, p.args);
      std::vector<int> matches = filter_by_attrs(scene, schema, constraints);
      if (matches.empty()) {
        throw NoReferentError("no entity in the scene matches the caption '" +
                              serialize_program(p) + "'");
      }
      result.ambiguous = matches.size() > 1;
      kb.apply(KbUpdate::seen(matches[0], constraints), sig.mask);
      kb.apply(KbUpdate::subject(matches[0]), sig.mask);
      break;
    }
    case Fn::kObjRelation: {
      const std::string& a1 = p.args[0];
      Position pos = position_arg(p.args[1]);
      const std::string& a2 = p.args[2];
      size_t d1 = dimension_of_value(schema, a1);
      size_t d2 = dimension_of_value(schema, a2);
      std::vector<int> xs = filter_by_values(scene, schema, {a1});
      std::vector<int> ys = filter_by_values(scene, schema, {a2});
      int px = -1, py = -1;
      std::set<int> x_used, y_used;
      for (int x : xs) {
        for (int y : ys) {
          if (x == y || !relates(scene, x, y, pos)) continue;
          if (px == -1) {
            px = x;
            py = y;
          }
          x_used.insert(x);
          y_used.insert(y);
        }
      }
      if (px == -1) {
        throw NoReferentError("no entity pair in the scene matches '" +
                              serialize_program(p) + "'");
      }
      result.ambiguous = x_used.size() > 1 || y_used.size() > 1;
      kb.apply(KbUpdate::seen(px, AttrMap{{d1, a1}}), sig.mask);
      kb.apply(KbUpdate::seen(py, AttrMap{{d2, a2}}), sig.mask);
      kb.apply(KbUpdate::subject(px), sig.mask);
      break;
    }
    default:
      throw ArgumentError("'" + sig.name + "' is not a caption function");
  }

  kb.mark_caption_executed(result.ambiguous);
  return result;
}

Answer execute_question(KnowledgeBase& kb, const Program& p) {
  const FunctionSignature& sig = Registry::instance().at(p.name);
  if (sig.kind != FunctionKind::kQuestion) {
    throw ArgumentError("'" + sig.name + "' is not a question function");
  }
  if (!kb.caption_executed()) {
    throw ExecutionStateError("questions require an executed caption");
  }
  if (kb.round() < 1) {
    throw ExecutionStateError(
        "the caller must advance the round before each question");
  }
  validate_program(p, kb.schema());
  const Scene& scene = kb.scene();
  const AttributeSchema& schema = kb.schema();
  int referent = resolve_referent(kb, sig, p);

  switch (sig.id) {
    case Fn::kCountAll: {
      std::vector<int> everything = all_entities(scene);
      int n = static_cast<int>(everything.size());
      kb.apply(KbUpdate::group(std::move(everything)), sig.mask);
      return Answer::of_number(n);
    }
    case Fn::kCountOther: {
      std::vector<int> others = unseen_entities(kb);
      if (others.size() == 1) promote(kb, sig.mask, others[0], {});
      return Answer::of_number(static_cast<int>(others.size()));
    }
    case Fn::kCountAllGroup: {
      return Answer::of_number(
          static_cast<int>(require_group(kb, sig).members.size()));
    }
    case Fn::kCountAttribute:
    case Fn::kExistAttribute: {
      std::vector<int> matches = filter_by_values(scene, schema, {p.args[0]});
      int n = static_cast<int>(matches.size());
      kb.apply(KbUpdate::group(std::move(matches)), sig.mask);
      return sig.id == Fn::kCountAttribute ? Answer::of_number(n)
                                           : Answer::of_yes_no(n > 0);
    }
    case Fn::kCountAttributeGroup:
    case Fn::kExistAttributeGroup: {
      const std::string& attr = p.args[0];
      size_t dim = dimension_of_value(schema, attr);
      std::vector<int> subset;
      for (int e : require_group(kb, sig).members) {
        if (scene.entities[e].attribute(dim) == attr) subset.push_back(e);
      }
      int n = static_cast<int>(subset.size());
      kb.apply(KbUpdate::group(std::move(subset)), sig.mask);
      return sig.id == Fn::kCountAttributeGroup ? Answer::of_number(n)
                                                : Answer::of_yes_no(n > 0);
    }
    case Fn::kCountObjRelImm:
    case Fn::kCountObjRelImm2:
    case Fn::kExistObjRelImm:
    case Fn::kExistObjRelImm2: {
      Position pos = position_arg(p.args[0]);
      std::vector<int> s = related_entities(scene, referent, pos);
      singleton_or_group(kb, sig, s);
      int n = static_cast<int>(s.size());
      return sig.category == Category::kCount ? Answer::of_number(n)
                                              : Answer::of_yes_no(n > 0);
    }
    case Fn::kCountObjRelEarly:
    case Fn::kExistObjRelEarly: {
      Position pos = position_arg(p.args[0]);
      std::vector<int> s = related_entities(scene, referent, pos);
      singleton_or_group(kb, sig, s);
      int n = static_cast<int>(s.size());
      return sig.category == Category::kCount ? Answer::of_number(n)
                                              : Answer::of_yes_no(n > 0);
    }
    case Fn::kCountObjExcludeImm:
    case Fn::kCountObjExcludeEarly:
    case Fn::kExistObjExcludeImm:
    case Fn::kExistObjExcludeEarly: {
      size_t dim = schema.require_dimension(p.args[0]);
      std::vector<int> s = same_attribute_entities(scene, referent, dim);
      singleton_or_group(kb, sig, s);
      int n = static_cast<int>(s.size());
      return sig.category == Category::kCount ? Answer::of_number(n)
                                              : Answer::of_yes_no(n > 0);
    }
    case Fn::kExistOther: {
      std::vector<int> others = unseen_entities(kb);
      bool any = !others.empty();
      kb.apply(KbUpdate::group(std::move(others)), sig.mask);
      return Answer::of_yes_no(any);
    }
    case Fn::kSeekAttrImm:
    case Fn::kSeekAttrImm2: {
      size_t dim = schema.require_dimension(p.args[0]);
      const std::string& v = scene.entities[referent].attribute(dim);
      kb.apply(KbUpdate::handle(referent, dim, v), sig.mask);
      return Answer::of_attribute(v);
    }
    case Fn::kSeekAttrEarly: {
      size_t dim = schema.require_dimension(p.args[0]);
      const std::string& v = scene.entities[referent].attribute(dim);
      kb.apply(KbUpdate::handle(referent, dim, v), sig.mask);
      kb.apply(KbUpdate::subject(referent), sig.mask);
      return Answer::of_attribute(v);
    }
    case Fn::kSeekAttrSimEarly: {
      size_t dim_t = schema.require_dimension(p.args[0]);
      const std::string& attr = p.args[1];
      size_t dim_a = dimension_of_value(schema, attr);
      std::vector<int> similar =
          same_attribute_entities(scene, referent, dim_a);
      if (similar.size() != 1) {
        throw AmbiguousSimilarError(
            "'" + sig.name + "' expects exactly one other '" + attr +
            "' entity, found " + std::to_string(similar.size()));
      }
      int e = similar[0];
      const std::string& v = scene.entities[e].attribute(dim_t);
      reveal(kb, sig.mask, e, AttrMap{{dim_a, attr}, {dim_t, v}});
      kb.apply(KbUpdate::subject(e), sig.mask);
      return Answer::of_attribute(v);
    }
    case Fn::kSeekAttrRelImm: {
      size_t dim = schema.require_dimension(p.args[0]);
      return seek_relational(kb, sig, referent, dim, position_arg(p.args[1]));
    }
    case Fn::kSeekAttrRelEarly: {
      size_t dim = schema.require_dimension(p.args[0]);
      return seek_relational(kb, sig, referent, dim, position_arg(p.args[1]));
    }
    default:
      break;
  }
  throw ArgumentError("'" + sig.name + "' is not a question function");
}

}  // namespace vds
