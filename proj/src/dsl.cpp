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

#include "vds/dsl.hpp"

#include <set>

#include "vds/error.hpp"
#include "vds/scene.hpp"

namespace vds {
namespace {

constexpr bool kX = false;  // blocked knowledge-base operation
constexpr bool kV = true;   // permitted knowledge-base operation

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '-' || c == '_';
}

}  // namespace

Registry::Registry() {
  using enum ArgKind;
  const auto cap = FunctionKind::kCaption;
  const auto qst = FunctionKind::kQuestion;
  // Masks are {fetch, handle, conv_subject, seen, groups}.
  fns_ = {
      // Caption functions.
      {Fn::kCountAtt, "count-att", cap, Category::kCaption, {kAttr},
       AnswerKind::kNone, {kX, kV, kX, kV, kV}, RefMode::kNone},
      {Fn::kExtremeRight, "extreme-right", cap, Category::kCaption,
       {kAttrList}, AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kExtremeLeft, "extreme-left", cap, Category::kCaption, {kAttrList},
       AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kExtremeBehind, "extreme-behind", cap, Category::kCaption,
       {kAttrList}, AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kExtremeFront, "extreme-front", cap, Category::kCaption,
       {kAttrList}, AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kExtremeCentre, "extreme-centre", cap, Category::kCaption,
       {kAttrList}, AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kUniqueObj, "unique-obj", cap, Category::kCaption, {kAttrList},
       AnswerKind::kNone, {kX, kV, kV, kV, kX}, RefMode::kNone},
      {Fn::kObjRelation, "obj-relation", cap, Category::kCaption,
       {kAttr, kPos, kAttr}, AnswerKind::kNone, {kX, kV, kV, kV, kX},
       RefMode::kNone},

      // Count questions.
      {Fn::kCountAll, "count-all", qst, Category::kCount, {},
       AnswerKind::kNumber, {kX, kX, kX, kX, kV}, RefMode::kNone},
      {Fn::kCountOther, "count-other", qst, Category::kCount, {},
       AnswerKind::kNumber, {kX, kX, kV, kV, kX}, RefMode::kNone},
      {Fn::kCountAllGroup, "count-all-group", qst, Category::kCount, {},
       AnswerKind::kNumber, {kX, kX, kX, kX, kX}, RefMode::kNone},
      {Fn::kCountAttribute, "count-attribute", qst, Category::kCount, {kAttr},
       AnswerKind::kNumber, {kX, kV, kV, kV, kV}, RefMode::kNone},
      {Fn::kCountAttributeGroup, "count-attribute-group", qst,
       Category::kCount, {kAttr}, AnswerKind::kNumber, {kX, kV, kV, kV, kV},
       RefMode::kNone},
      {Fn::kCountObjRelImm, "count-obj-rel-imm", qst, Category::kCount,
       {kPos}, AnswerKind::kNumber, {kX, kX, kV, kV, kV}, RefMode::kSubject},
      {Fn::kCountObjRelImm2, "count-obj-rel-imm-2", qst, Category::kCount,
       {kPos}, AnswerKind::kNumber, {kX, kX, kV, kV, kV},
       RefMode::kPrevSubject},
      {Fn::kCountObjRelEarly, "count-obj-rel-early", qst, Category::kCount,
       {kPos, kAttr}, AnswerKind::kNumber, {kV, kV, kV, kV, kV},
       RefMode::kFetch},
      {Fn::kCountObjExcludeImm, "count-obj-exclude-imm", qst, Category::kCount,
       {kAttrType}, AnswerKind::kNumber, {kX, kX, kV, kV, kV},
       RefMode::kSubject},
      {Fn::kCountObjExcludeEarly, "count-obj-exclude-early", qst,
       Category::kCount, {kAttrType, kAttr}, AnswerKind::kNumber,
       {kV, kX, kV, kV, kV}, RefMode::kFetch},

      // Exist questions.
      {Fn::kExistOther, "exist-other", qst, Category::kExist, {},
       AnswerKind::kYesNo, {kX, kX, kX, kV, kV}, RefMode::kNone},
      {Fn::kExistAttribute, "exist-attribute", qst, Category::kExist, {kAttr},
       AnswerKind::kYesNo, {kX, kV, kX, kV, kV}, RefMode::kNone},
      {Fn::kExistAttributeGroup, "exist-attribute-group", qst,
       Category::kExist, {kAttr}, AnswerKind::kYesNo, {kX, kV, kV, kV, kV},
       RefMode::kNone},
      {Fn::kExistObjRelImm, "exist-obj-rel-imm", qst, Category::kExist,
       {kPos}, AnswerKind::kYesNo, {kX, kX, kV, kV, kV}, RefMode::kSubject},
      {Fn::kExistObjRelImm2, "exist-obj-rel-imm2", qst, Category::kExist,
       {kPos}, AnswerKind::kYesNo, {kX, kX, kV, kV, kV},
       RefMode::kPrevSubject},
      {Fn::kExistObjRelEarly, "exist-obj-rel-early", qst, Category::kExist,
       {kPos, kAttr}, AnswerKind::kYesNo, {kV, kV, kV, kV, kV},
       RefMode::kFetch},
      {Fn::kExistObjExcludeImm, "exist-obj-exclude-imm", qst, Category::kExist,
       {kAttrType}, AnswerKind::kYesNo, {kX, kX, kV, kV, kV},
       RefMode::kSubject},
      {Fn::kExistObjExcludeEarly, "exist-obj-exclude-early", qst,
       Category::kExist, {kAttrType, kAttr}, AnswerKind::kYesNo,
       {kV, kX, kX, kX, kV}, RefMode::kFetch},

      // Seek questions.
      {Fn::kSeekAttrImm, "seek-attr-imm", qst, Category::kSeek, {kAttrType},
       AnswerKind::kAttribute, {kX, kV, kX, kX, kX}, RefMode::kSubject},
      {Fn::kSeekAttrImm2, "seek-attr-imm2", qst, Category::kSeek, {kAttrType},
       AnswerKind::kAttribute, {kX, kV, kX, kX, kX}, RefMode::kPrevSubject},
      {Fn::kSeekAttrEarly, "seek-attr-early", qst, Category::kSeek,
       {kAttrType, kAttr}, AnswerKind::kAttribute, {kV, kV, kV, kV, kX},
       RefMode::kFetch},
      {Fn::kSeekAttrSimEarly, "seek-attr-sim-early", qst, Category::kSeek,
       {kAttrType, kAttr}, AnswerKind::kAttribute, {kV, kV, kV, kV, kX},
       RefMode::kFetch},
      // The source table lists only attr_type here, but the function cannot
      // execute without a direction; the -early twin takes one explicitly.
      {Fn::kSeekAttrRelImm, "seek-attr-rel-imm", qst, Category::kSeek,
       {kAttrType, kPos}, AnswerKind::kAttribute, {kX, kV, kV, kV, kX},
       RefMode::kSubject},
      {Fn::kSeekAttrRelEarly, "seek-attr-rel-early", qst, Category::kSeek,
       {kAttrType, kPos, kAttr}, AnswerKind::kAttribute, {kV, kV, kV, kV, kX},
       RefMode::kFetch},
  };
  for (size_t i = 0; i < fns_.size(); ++i) {
    by_name_.emplace(fns_[i].name, i);
  }
  aliases_ = {{"seek-attribute-early", "seek-attr-early"}};
}

const Registry& Registry::instance() {
  static const Registry registry;
  return registry;
}

const FunctionSignature* Registry::find(std::string_view name) const {
  auto alias = aliases_.find(name);
  if (alias != aliases_.end()) name = alias->second;
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &fns_[it->second];
}

const FunctionSignature& Registry::at(std::string_view name) const {
  const FunctionSignature* sig = find(name);
  if (!sig) {
    throw UnknownFunctionError("unknown function '" + std::string(name) + "'");
  }
  return *sig;
}

const FunctionSignature& Registry::at(Fn id) const {
  return fns_[static_cast<size_t>(id)];
}

std::vector<const FunctionSignature*> Registry::captions() const {
  std::vector<const FunctionSignature*> out;
  for (const auto& f : fns_) {
    if (f.kind == FunctionKind::kCaption) out.push_back(&f);
  }
  return out;
}

std::vector<const FunctionSignature*> Registry::questions() const {
  std::vector<const FunctionSignature*> out;
  for (const auto& f : fns_) {
    if (f.kind == FunctionKind::kQuestion) out.push_back(&f);
  }
  return out;
}

size_t Registry::question_count() const { return questions().size(); }

namespace {

void check_arity(const FunctionSignature& sig, size_t got) {
  // attr_list bounds are schema-dependent; parse-time uses the loosest upper
  // bound (validate_program re-checks against the actual schema).
  size_t lo = sig.min_arity();
  size_t hi = sig.has_attr_list() ? 16 : sig.args.size();
  if (got < lo || got > hi) {
    std::string expected =
        sig.has_attr_list()
            ? "1.." + std::to_string(hi)
            : std::to_string(sig.args.size());
    throw ArgumentError("'" + sig.name + "' expects " + expected +
                        " arguments, got " + std::to_string(got));
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                               text[i] == '\n' || text[i] == '\r')) {
      ++i;
    }
  };
  auto read_token = [&]() -> std::string {
    size_t start = i;
    while (i < text.size() && is_name_char(text[i])) ++i;
    return std::string(text.substr(start, i - start));
  };

  skip_ws();
  size_t name_pos = i;
  std::string name = read_token();
  if (name.empty()) {
    throw SyntaxError("expected a function name at position " +
                          std::to_string(name_pos),
                      name_pos);
  }
  const FunctionSignature& sig = Registry::instance().at(name);

  Program p;
  p.name = sig.name;  // canonical (alias-resolved) name
  skip_ws();
  if (i < text.size() && text[i] == '(') {
    ++i;
    skip_ws();
    if (i < text.size() && text[i] == ')') {
      ++i;
    } else {
      for (;;) {
        skip_ws();
        size_t arg_pos = i;
        std::string arg = read_token();
        if (arg.empty()) {
          throw SyntaxError("expected an argument at position " +
                                std::to_string(arg_pos),
                            arg_pos);
        }
        p.args.push_back(std::move(arg));
        skip_ws();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        if (i < text.size() && text[i] == ')') {
          ++i;
          break;
        }
        throw SyntaxError("expected ',' or ')' at position " +
                              std::to_string(i),
                          i);
      }
    }
  }
  skip_ws();
  if (i != text.size()) {
    throw SyntaxError("unexpected trailing text at position " +
                          std::to_string(i),
                      i);
  }
  check_arity(sig, p.args.size());
  return p;
}

std::string serialize_program(const Program& p) {
  if (p.args.empty()) return p.name;
  std::string out = p.name + "(";
  for (size_t i = 0; i < p.args.size(); ++i) {
    if (i) out += ", ";
    out += p.args[i];
  }
  out += ")";
  return out;
}

void validate_program(const Program& p, const AttributeSchema& schema) {
  const FunctionSignature& sig = Registry::instance().at(p.name);
  if (p.name != sig.name) {
    throw ArgumentError("program name '" + p.name +
                        "' is not canonical (expected '" + sig.name + "')");
  }
  size_t lo = sig.min_arity();
  size_t hi = sig.max_arity(schema);
  if (p.args.size() < lo || p.args.size() > hi) {
    throw ArgumentError(
        "'" + sig.name + "' expects " +
        (sig.has_attr_list() ? std::to_string(lo) + ".." + std::to_string(hi)
                             : std::to_string(sig.args.size())) +
        " arguments, got " + std::to_string(p.args.size()));
  }
  if (sig.has_attr_list()) {
    std::set<size_t> dims;
    for (const std::string& a : p.args) {
      auto dim = schema.value_dimension(a);
      if (!dim) {
        throw ArgumentError("'" + sig.name + "': '" + a +
                            "' is not an attribute value");
      }
      if (!dims.insert(*dim).second) {
        throw ArgumentError("'" + sig.name +
                            "': two values share dimension '" +
                            schema.dimension(*dim) + "'");
      }
    }
    return;
  }
  for (size_t i = 0; i < sig.args.size(); ++i) {
    const std::string& a = p.args[i];
    const std::string where =
        "'" + sig.name + "' argument " + std::to_string(i + 1);
    switch (sig.args[i]) {
      case ArgKind::kAttr:
        if (!schema.has_value(a)) {
          throw ArgumentError(where + ": '" + a +
                              "' is not an attribute value");
        }
        break;
      case ArgKind::kAttrType:
        if (!schema.has_dimension(a)) {
          throw ArgumentError(where + ": '" + a + "' is not a dimension name");
        }
        break;
      case ArgKind::kPos:
        if (!parse_position(a)) {
          throw ArgumentError(where + ": '" + a + "' is not a position");
        }
        break;
      case ArgKind::kAttrList:
        break;  // unreachable: attr_list signatures are handled above
    }
  }
}

Category category_of(const Program& p) {
  return Registry::instance().at(p.name).category;
}

const char* to_string(Category c) {
  switch (c) {
    case Category::kCaption:
      return "caption";
    case Category::kCount:
      return "count";
    case Category::kExist:
      return "exist";
    case Category::kSeek:
      return "seek";
  }
  return "?";
}

}  // namespace vds
