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

#ifndef VDS_DSL_HPP_
#define VDS_DSL_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vds/schema.hpp"

namespace vds {

enum class FunctionKind { kCaption, kQuestion };

enum class Category { kCaption, kCount, kExist, kSeek };

enum class AnswerKind { kNone, kNumber, kYesNo, kAttribute };

enum class ArgKind { kAttr, kAttrType, kPos, kAttrList };

// How a question resolves its referent: none (scene-level), the current
// conversation subject ("imm"), the previous subject ("imm2"), or a
// knowledge-base fetch by attribute ("early").
enum class RefMode { kNone, kSubject, kPrevSubject, kFetch };

// Which knowledge-base operations a function is allowed to perform.
struct KbMask {
  bool fetch = false;
  bool handle = false;
  bool conv_subject = false;
  bool seen = false;
  bool groups = false;

  friend bool operator==(const KbMask&, const KbMask&) = default;
};

// Dense ids for switch-based dispatch in the executor.
enum class Fn {
  kCountAtt,
  kExtremeRight,
  kExtremeLeft,
  kExtremeBehind,
  kExtremeFront,
  kExtremeCentre,
  kUniqueObj,
  kObjRelation,
  kCountAll,
  kCountOther,
  kCountAllGroup,
  kCountAttribute,
  kCountAttributeGroup,
  kCountObjRelImm,
  kCountObjRelImm2,
  kCountObjRelEarly,
  kCountObjExcludeImm,
  kCountObjExcludeEarly,
  kExistOther,
  kExistAttribute,
  kExistAttributeGroup,
  kExistObjRelImm,
  kExistObjRelImm2,
  kExistObjRelEarly,
  kExistObjExcludeImm,
  kExistObjExcludeEarly,
  kSeekAttrImm,
  kSeekAttrImm2,
  kSeekAttrEarly,
  kSeekAttrSimEarly,
  kSeekAttrRelImm,
  kSeekAttrRelEarly,
};

struct FunctionSignature {
  Fn id;
  std::string name;
  FunctionKind kind;
  Category category;
  std::vector<ArgKind> args;  // kAttrList, when present, is the sole entry
  AnswerKind output;
  KbMask mask;
  RefMode ref;

  bool has_attr_list() const {
    return !args.empty() && args[0] == ArgKind::kAttrList;
  }
  size_t min_arity() const { return has_attr_list() ? 1 : args.size(); }
  size_t max_arity(const AttributeSchema& schema) const {
    return has_attr_list() ? schema.dimension_count() : args.size();
  }
};

// The immutable function inventory: 8 caption functions and 24 question
// functions, each with its argument spec, output kind, and the mask of
// knowledge-base operations it may perform.
class Registry {
 public:
  static const Registry& instance();

  // Alias-aware lookup; returns nullptr when the name is unknown.
  const FunctionSignature* find(std::string_view name) const;
  // Alias-aware lookup; throws UnknownFunctionError.
  const FunctionSignature& at(std::string_view name) const;
  const FunctionSignature& at(Fn id) const;

  const std::vector<FunctionSignature>& all() const { return fns_; }
  std::vector<const FunctionSignature*> captions() const;
  std::vector<const FunctionSignature*> questions() const;
  size_t question_count() const;

 private:
  Registry();
  std::vector<FunctionSignature> fns_;
  std::map<std::string, size_t, std::less<>> by_name_;
  std::map<std::string, std::string, std::less<>> aliases_;
};

struct Program {
  std::string name;
  std::vector<std::string> args;

  friend bool operator==(const Program&, const Program&) = default;
};

// Parses `name(arg, arg)` (zero-arg functions also accept the bare name).
// Checks syntax, function existence, and arity; argument-token validity
// against a schema is validate_program's job. Alias names are canonicalized.
Program parse_program(std::string_view text);

// Canonical text form: `name(a1, a2)`, or bare `name` for zero args.
std::string serialize_program(const Program& p);

// Full validation: known function, arity, and argument kinds/domains.
void validate_program(const Program& p, const AttributeSchema& schema);

Category category_of(const Program& p);

const char* to_string(Category c);

}  // namespace vds

#endif  // VDS_DSL_HPP_
