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

#ifndef VDS_TEMPLATES_HPP_
#define VDS_TEMPLATES_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vds/dsl.hpp"
#include "vds/schema.hpp"

namespace vds {

// A surface-form slot. Slots bind to program arguments in order; {attr_list}
// binds the whole argument list of list-taking captions.
//   {attr}       bare value token            "red"
//   {attr_type}  dimension name              "colour"
//   {pos}        direction phrase            "to the right of"
//   {attr_np}    value as a noun phrase      "red object" / "cube"
//   {attr_nps}   plural noun phrase          "red objects" / "cubes"
//   {attr_pred}  value as a predicate        "red" / "cubes"
//   {attr_list}  ordered value list as NP    "small red object" / "small cube"
enum class SlotKind {
  kAttr,
  kAttrType,
  kPos,
  kAttrNp,
  kAttrNps,
  kAttrPred,
  kAttrList,
};

struct PatternItem {
  bool is_slot = false;
  std::string literal;  // lowercased word when !is_slot
  SlotKind slot = SlotKind::kAttr;
};

struct CompiledForm {
  std::string pattern;  // the authored string, slots in braces
  std::vector<PatternItem> items;
};

struct Template {
  std::string program_name;
  FunctionKind kind = FunctionKind::kQuestion;
  std::vector<CompiledForm> forms;
};

// The bidirectional NL layer: renders programs to English and parses that
// English back. Immutable after construction; render/parse are pure.
class TemplateSet {
 public:
  // The embedded default template inventory (two forms per function).
  static TemplateSet builtin(const AttributeSchema& schema);
  // {"templates":[{"program":..., "kind":"caption"|"question",
  //                "forms":[...]}]}
  static TemplateSet from_json(const nlohmann::json& j,
                               const AttributeSchema& schema);
  static TemplateSet load(const std::string& path,
                          const AttributeSchema& schema);

  // Deterministic English for a valid program; variant wraps modulo the
  // function's form count. Questions end in '?', captions are bare.
  std::string render(const Program& p, size_t variant) const;

  // Longest-match parse back to a program; case- and terminal-punctuation-
  // insensitive. Throws SchemaError when a template's fixed words line up but
  // a slot token is not in the schema, NoTemplateMatchError (with the three
  // closest forms) otherwise.
  Program parse_nl(std::string_view text, FunctionKind kind) const;

  size_t variant_count(std::string_view program_name) const;
  const std::vector<Template>& templates() const { return templates_; }
  const AttributeSchema& schema() const { return *schema_; }

  nlohmann::json to_json() const;

 private:
  TemplateSet(const AttributeSchema& schema, std::vector<Template> templates);

  const Template& require(std::string_view program_name) const;

  const AttributeSchema* schema_;
  std::vector<Template> templates_;
  std::map<std::string, size_t, std::less<>> by_name_;
  std::optional<size_t> noun_dim_;  // dimension whose values act as nouns
};

}  // namespace vds

#endif  // VDS_TEMPLATES_HPP_
