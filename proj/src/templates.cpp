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

#include "vds/templates.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "vds/error.hpp"
#include "vds/scene.hpp"

namespace vds {
namespace {

// Every function's surface forms. Kept as the same JSON shape external
// template files use, so the embedded set exercises the loading path.
constexpr const char* kBuiltinTemplates = R"JSON(
{"templates": [
  {"program": "count-att", "kind": "caption", "forms": [
    "There are {attr_nps} in the scene",
    "The scene has some {attr_nps}"]},
  {"program": "extreme-right", "kind": "caption", "forms": [
    "There is a {attr_list} on the far right",
    "A {attr_list} sits rightmost in the scene"]},
  {"program": "extreme-left", "kind": "caption", "forms": [
    "There is a {attr_list} on the far left",
    "A {attr_list} sits leftmost in the scene"]},
  {"program": "extreme-behind", "kind": "caption", "forms": [
    "There is a {attr_list} at the back of the scene",
    "A {attr_list} sits behind everything else"]},
  {"program": "extreme-front", "kind": "caption", "forms": [
    "There is a {attr_list} at the front of the scene",
    "A {attr_list} sits in front of everything else"]},
  {"program": "extreme-centre", "kind": "caption", "forms": [
    "There is a {attr_list} in the center",
    "A {attr_list} sits in the middle of the scene"]},
  {"program": "unique-obj", "kind": "caption", "forms": [
    "There is a {attr_list}",
    "The scene contains a {attr_list}"]},
  {"program": "obj-relation", "kind": "caption", "forms": [
    "There is a {attr_np} {pos} a {attr_np}",
    "A {attr_np} sits {pos} a {attr_np}"]},

  {"program": "count-all", "kind": "question", "forms": [
    "How many objects are there in the scene",
    "How many things are there in total"]},
  {"program": "count-other", "kind": "question", "forms": [
    "How many other objects are there",
    "How many other objects does the scene have"]},
  {"program": "count-all-group", "kind": "question", "forms": [
    "How many of them are there",
    "How many objects are in that group"]},
  {"program": "count-attribute", "kind": "question", "forms": [
    "How many {attr_nps} are there",
    "How many {attr_nps} does the scene have"]},
  {"program": "count-attribute-group", "kind": "question", "forms": [
    "How many of them are {attr_pred}",
    "How many of those are {attr_pred}"]},
  {"program": "count-obj-rel-imm", "kind": "question", "forms": [
    "How many objects are {pos} it",
    "How many things are {pos} it"]},
  {"program": "count-obj-rel-imm-2", "kind": "question", "forms": [
    "How many objects are {pos} the previous one",
    "How many things are {pos} the previous one"]},
  {"program": "count-obj-rel-early", "kind": "question", "forms": [
    "How many objects are {pos} the {attr_np} mentioned earlier",
    "How many things are {pos} the earlier {attr_np}"]},
  {"program": "count-obj-exclude-imm", "kind": "question", "forms": [
    "How many other objects share its {attr_type}",
    "How many other things have the same {attr_type} as it"]},
  {"program": "count-obj-exclude-early", "kind": "question", "forms": [
    "How many other objects share the {attr_type} of the {attr_np} mentioned earlier",
    "How many other things have the same {attr_type} as the earlier {attr_np}"]},

  {"program": "exist-other", "kind": "question", "forms": [
    "Are there any other objects",
    "Does the scene have any other objects"]},
  {"program": "exist-attribute", "kind": "question", "forms": [
    "Are there any {attr_nps}",
    "Does the scene have any {attr_nps}"]},
  {"program": "exist-attribute-group", "kind": "question", "forms": [
    "Are any of them {attr_pred}",
    "Are any of those {attr_pred}"]},
  {"program": "exist-obj-rel-imm", "kind": "question", "forms": [
    "Are there any objects {pos} it",
    "Is there anything {pos} it"]},
  {"program": "exist-obj-rel-imm2", "kind": "question", "forms": [
    "Are there any objects {pos} the previous one",
    "Is there anything {pos} the previous one"]},
  {"program": "exist-obj-rel-early", "kind": "question", "forms": [
    "Are there any objects {pos} the {attr_np} mentioned earlier",
    "Is there anything {pos} the earlier {attr_np}"]},
  {"program": "exist-obj-exclude-imm", "kind": "question", "forms": [
    "Do any other objects share its {attr_type}",
    "Is there any other thing with the same {attr_type} as it"]},
  {"program": "exist-obj-exclude-early", "kind": "question", "forms": [
    "Do any other objects share the {attr_type} of the {attr_np} mentioned earlier",
    "Is there any other thing with the same {attr_type} as the earlier {attr_np}"]},

  {"program": "seek-attr-imm", "kind": "question", "forms": [
    "What is its {attr_type}",
    "What {attr_type} is it"]},
  {"program": "seek-attr-imm2", "kind": "question", "forms": [
    "What is the {attr_type} of the previous one",
    "What {attr_type} is the previous one"]},
  {"program": "seek-attr-early", "kind": "question", "forms": [
    "What is the {attr_type} of the {attr_np} mentioned earlier",
    "What {attr_type} is the earlier {attr_np}"]},
  {"program": "seek-attr-sim-early", "kind": "question", "forms": [
    "What is the {attr_type} of the other {attr_np}",
    "Which {attr_type} does the other {attr_np} have"]},
  {"program": "seek-attr-rel-imm", "kind": "question", "forms": [
    "What is the {attr_type} of the object {pos} it",
    "Which {attr_type} does the thing {pos} it have"]},
  {"program": "seek-attr-rel-early", "kind": "question", "forms": [
    "What is the {attr_type} of the object {pos} the {attr_np} mentioned earlier",
    "Which {attr_type} does the thing {pos} the earlier {attr_np} have"]}
]}
)JSON";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string strip_plural(const std::string& tok) {
  return (tok.size() > 1 && tok.back() == 's') ? tok.substr(0, tok.size() - 1)
                                               : tok;
}

bool is_punct_tail(char c) {
  return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' || c == ':';
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && is_punct_tail(cur.back())) cur.pop_back();
    if (!cur.empty()) toks.push_back(lower(cur));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return toks;
}

std::optional<SlotKind> slot_kind_for(std::string_view name) {
  if (name == "attr") return SlotKind::kAttr;
  if (name == "attr_type") return SlotKind::kAttrType;
  if (name == "pos") return SlotKind::kPos;
  if (name == "attr_np") return SlotKind::kAttrNp;
  if (name == "attr_nps") return SlotKind::kAttrNps;
  if (name == "attr_pred") return SlotKind::kAttrPred;
  if (name == "attr_list") return SlotKind::kAttrList;
  return std::nullopt;
}

CompiledForm compile_form(const std::string& pattern) {
  CompiledForm form;
  form.pattern = pattern;
  for (const std::string& tok : tokenize(pattern)) {
    if (tok.size() >= 2 && tok.front() == '{' && tok.back() == '}') {
      auto kind = slot_kind_for(std::string_view(tok).substr(1, tok.size() - 2));
      if (!kind) {
        throw SchemaError("unknown slot '" + tok + "' in template pattern '" +
                          pattern + "'");
      }
      PatternItem item;
      item.is_slot = true;
      item.slot = *kind;
      form.items.push_back(std::move(item));
    } else {
      PatternItem item;
      item.literal = tok;
      form.items.push_back(std::move(item));
    }
  }
  if (form.items.empty()) {
    throw SchemaError("empty template pattern");
  }
  return form;
}

const std::vector<std::string>& position_phrase(Position pos) {
  static const std::vector<std::string> right = {"to", "the", "right", "of"};
  static const std::vector<std::string> left = {"to", "the", "left", "of"};
  static const std::vector<std::string> front = {"in", "front", "of"};
  static const std::vector<std::string> behind = {"behind"};
  switch (pos) {
    case Position::kRight:
      return right;
    case Position::kLeft:
      return left;
    case Position::kFront:
      return front;
    case Position::kBehind:
      return behind;
  }
  return behind;
}

ArgKind expected_arg_kind(SlotKind k) {
  switch (k) {
    case SlotKind::kAttrType:
      return ArgKind::kAttrType;
    case SlotKind::kPos:
      return ArgKind::kPos;
    default:
      return ArgKind::kAttr;
  }
}

}  // namespace

TemplateSet::TemplateSet(const AttributeSchema& schema,
                         std::vector<Template> templates)
    : schema_(&schema), templates_(std::move(templates)) {
  noun_dim_ = schema.dimension_index("shape");

  const Registry& reg = Registry::instance();
  for (size_t i = 0; i < templates_.size(); ++i) {
    const Template& t = templates_[i];
    const FunctionSignature& sig = reg.at(t.program_name);
    if (sig.kind != t.kind) {
      throw SchemaError("template for '" + t.program_name +
                        "' declares the wrong kind");
    }
    if (t.forms.empty()) {
      throw SchemaError("template for '" + t.program_name + "' has no forms");
    }
    for (const CompiledForm& form : t.forms) {
      std::vector<SlotKind> slots;
      for (const PatternItem& item : form.items) {
        if (item.is_slot) slots.push_back(item.slot);
      }
      if (sig.has_attr_list()) {
        if (slots.size() != 1 || slots[0] != SlotKind::kAttrList) {
          throw SchemaError("'" + t.program_name + "' form '" + form.pattern +
                            "' must use exactly one {attr_list} slot");
        }
      } else {
        if (slots.size() != sig.args.size()) {
          throw SchemaError("'" + t.program_name + "' form '" + form.pattern +
                            "' has " + std::to_string(slots.size()) +
                            " slots for " + std::to_string(sig.args.size()) +
                            " arguments");
        }
        for (size_t s = 0; s < slots.size(); ++s) {
          if (slots[s] == SlotKind::kAttrList ||
              expected_arg_kind(slots[s]) != sig.args[s]) {
            throw SchemaError("'" + t.program_name + "' form '" +
                              form.pattern + "': slot " +
                              std::to_string(s + 1) +
                              " does not fit the argument kind");
          }
        }
      }
    }
    if (!by_name_.emplace(t.program_name, i).second) {
      throw SchemaError("duplicate template for '" + t.program_name + "'");
    }
  }
  for (const FunctionSignature& sig : reg.all()) {
    if (!by_name_.count(sig.name)) {
      throw SchemaError("no template covers function '" + sig.name + "'");
    }
  }
}

TemplateSet TemplateSet::builtin(const AttributeSchema& schema) {
  return from_json(nlohmann::json::parse(kBuiltinTemplates), schema);
}

TemplateSet TemplateSet::from_json(const nlohmann::json& j,
                                   const AttributeSchema& schema) {
  if (!j.is_object() || !j.contains("templates") ||
      !j.at("templates").is_array()) {
    throw SchemaError("template JSON needs a top-level 'templates' array");
  }
  std::vector<Template> templates;
  for (const auto& entry : j.at("templates")) {
    if (!entry.is_object() || !entry.contains("program") ||
        !entry.contains("kind") || !entry.contains("forms")) {
      throw SchemaError(
          "each template needs 'program', 'kind', and 'forms' fields");
    }
    Template t;
    t.program_name = entry.at("program").get<std::string>();
    std::string kind = entry.at("kind").get<std::string>();
    if (kind == "caption") {
      t.kind = FunctionKind::kCaption;
    } else if (kind == "question") {
      t.kind = FunctionKind::kQuestion;
    } else {
      throw SchemaError("template kind must be 'caption' or 'question', got '" +
                        kind + "'");
    }
    for (const auto& f : entry.at("forms")) {
      t.forms.push_back(compile_form(f.get<std::string>()));
    }
    templates.push_back(std::move(t));
  }
  return TemplateSet(schema, std::move(templates));
}

TemplateSet TemplateSet::load(const std::string& path,
                              const AttributeSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("template file '" + path + "': " + e.what(), e.byte);
  }
  return from_json(j, schema);
}

nlohmann::json TemplateSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Template& t : templates_) {
    nlohmann::json forms = nlohmann::json::array();
    for (const CompiledForm& f : t.forms) forms.push_back(f.pattern);
    arr.push_back(nlohmann::json{
        {"program", t.program_name},
        {"kind", t.kind == FunctionKind::kCaption ? "caption" : "question"},
        {"forms", std::move(forms)}});
  }
  return nlohmann::json{{"templates", std::move(arr)}};
}

const Template& TemplateSet::require(std::string_view program_name) const {
  auto it = by_name_.find(program_name);
  if (it == by_name_.end()) {
    throw UnknownFunctionError("no template for '" + std::string(program_name) +
                               "'");
  }
  return templates_[it->second];
}

size_t TemplateSet::variant_count(std::string_view program_name) const {
  return require(program_name).forms.size();
}

namespace {

class Renderer {
 public:
  Renderer(const AttributeSchema& schema, std::optional<size_t> noun_dim)
      : schema_(schema), noun_dim_(noun_dim) {}

  bool is_noun(const std::string& value) const {
    return noun_dim_ && schema_.value_dimension(value) == noun_dim_;
  }

  std::string np(const std::string& value) const {
    return is_noun(value) ? value : value + " object";
  }
  std::string nps(const std::string& value) const {
    return is_noun(value) ? value + "s" : value + " objects";
  }
  std::string pred(const std::string& value) const {
    return is_noun(value) ? value + "s" : value;
  }
  std::string list_np(const std::vector<std::string>& values) const {
    // Canonical display order follows schema dimensions; a noun value acts
    // as the head noun, otherwise "object" fills in.
    std::vector<std::pair<size_t, std::string>> ordered;
    for (const std::string& v : values) {
      auto dim = schema_.value_dimension(v);
      if (!dim) throw ArgumentError("'" + v + "' is not an attribute value");
      ordered.emplace_back(*dim, v);
    }
    std::sort(ordered.begin(), ordered.end());
    std::string out;
    bool has_noun = false;
    for (const auto& [dim, v] : ordered) {
      if (!out.empty()) out += ' ';
      out += v;
      if (noun_dim_ && dim == *noun_dim_) has_noun = true;
    }
    if (!has_noun) out += " object";
    return out;
  }

 private:
  const AttributeSchema& schema_;
  std::optional<size_t> noun_dim_;
};

}  // namespace

std::string TemplateSet::render(const Program& p, size_t variant) const {
  validate_program(p, *schema_);
  const Template& t = require(p.name);
  const CompiledForm& form = t.forms[variant % t.forms.size()];
  Renderer r(*schema_, noun_dim_);

  std::string out;
  size_t arg_i = 0;
  auto next_arg = [&]() -> const std::string& {
    if (arg_i >= p.args.size()) {
      throw ArgumentError("template for '" + p.name +
                          "' consumes more arguments than given");
    }
    return p.args[arg_i++];
  };
  for (const PatternItem& item : form.items) {
    std::string word;
    if (!item.is_slot) {
      word = item.literal;
    } else {
      switch (item.slot) {
        case SlotKind::kAttr:
          word = next_arg();
          break;
        case SlotKind::kAttrType:
          word = next_arg();
          break;
        case SlotKind::kPos: {
          auto pos = parse_position(next_arg());
          const auto& phrase = position_phrase(*pos);
          for (size_t i = 0; i < phrase.size(); ++i) {
            if (i) word += ' ';
            word += phrase[i];
          }
          break;
        }
        case SlotKind::kAttrNp:
          word = r.np(next_arg());
          break;
        case SlotKind::kAttrNps:
          word = r.nps(next_arg());
          break;
        case SlotKind::kAttrPred:
          word = r.pred(next_arg());
          break;
        case SlotKind::kAttrList:
          word = r.list_np(p.args);
          arg_i = p.args.size();
          break;
      }
    }
    if (!out.empty()) out += ' ';
    out += word;
  }
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  if (t.kind == FunctionKind::kQuestion) out += '?';
  return out;
}

namespace {

struct Capture {
  SlotKind slot;
  std::string token;  // the value-bearing token as it appeared
};

// Token matcher for one compiled form. Strict mode checks slot vocabulary;
// lenient mode only checks shape, so a failed strict parse can be diagnosed
// as either an unknown word (SchemaError) or a structural mismatch.
class Matcher {
 public:
  Matcher(const AttributeSchema& schema, std::optional<size_t> noun_dim,
          const std::vector<std::string>& tokens, bool lenient)
      : schema_(schema),
        noun_dim_(noun_dim),
        toks_(tokens),
        lenient_(lenient) {}

  bool run(const CompiledForm& form, std::vector<std::string>* args,
           std::vector<Capture>* captures) {
    args_.clear();
    captures_.clear();
    if (!match(form.items, 0, 0)) return false;
    *args = args_;
    *captures = captures_;
    return true;
  }

 private:
  bool is_noun_value(const std::string& tok) const {
    return noun_dim_ && schema_.value_dimension(tok) == noun_dim_;
  }

  bool match(const std::vector<PatternItem>& items, size_t pi, size_t ti) {
    if (pi == items.size()) return ti == toks_.size();
    const PatternItem& item = items[pi];
    if (!item.is_slot) {
      if (ti < toks_.size() && toks_[ti] == item.literal) {
        return match(items, pi + 1, ti + 1);
      }
      return false;
    }
    size_t args_mark = args_.size();
    size_t caps_mark = captures_.size();
    auto rollback = [&] {
      args_.resize(args_mark);
      captures_.resize(caps_mark);
    };
    switch (item.slot) {
      case SlotKind::kAttr:
      case SlotKind::kAttrType: {
        if (ti >= toks_.size()) return false;
        const std::string& tok = toks_[ti];
        bool ok = lenient_ || (item.slot == SlotKind::kAttr
                                   ? schema_.has_value(tok)
                                   : schema_.has_dimension(tok));
        if (!ok) return false;
        args_.push_back(tok);
        captures_.push_back({item.slot, tok});
        if (match(items, pi + 1, ti + 1)) return true;
        rollback();
        return false;
      }
      case SlotKind::kPos: {
        for (Position pos : kAllPositions) {
          const auto& phrase = position_phrase(pos);
          if (ti + phrase.size() > toks_.size()) continue;
          bool ok = true;
          for (size_t i = 0; i < phrase.size(); ++i) {
            if (toks_[ti + i] != phrase[i]) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          args_.push_back(to_string(pos));
          captures_.push_back({item.slot, to_string(pos)});
          if (match(items, pi + 1, ti + phrase.size())) return true;
          rollback();
        }
        return false;
      }
      case SlotKind::kAttrNp:
      case SlotKind::kAttrNps: {
        bool plural = item.slot == SlotKind::kAttrNps;
        const std::string filler = plural ? "objects" : "object";
        // Adjective + filler ("red object(s)").
        if (ti + 1 < toks_.size() && toks_[ti + 1] == filler) {
          const std::string& tok = toks_[ti];
          bool ok = lenient_ ||
                    (schema_.has_value(tok) && !is_noun_value(tok));
          if (ok) {
            args_.push_back(tok);
            captures_.push_back({item.slot, tok});
            if (match(items, pi + 1, ti + 2)) return true;
            rollback();
          }
        }
        // Bare noun ("cube"/"cubes").
        if (ti < toks_.size()) {
          const std::string& tok = toks_[ti];
          std::string value = plural ? strip_plural(tok) : tok;
          bool ok = lenient_ || is_noun_value(value);
          if (ok) {
            args_.push_back(lenient_ && !is_noun_value(value) ? tok : value);
            captures_.push_back({item.slot, tok});
            if (match(items, pi + 1, ti + 1)) return true;
            rollback();
          }
        }
        return false;
      }
      case SlotKind::kAttrPred: {
        if (ti >= toks_.size()) return false;
        const std::string& tok = toks_[ti];
        std::string value = tok;
        bool ok;
        if (lenient_) {
          ok = true;
        } else if (schema_.has_value(tok) && !is_noun_value(tok)) {
          ok = true;
        } else {
          value = strip_plural(tok);
          ok = is_noun_value(value);
        }
        if (!ok) return false;
        args_.push_back(lenient_ ? tok : value);
        captures_.push_back({item.slot, tok});
        if (match(items, pi + 1, ti + 1)) return true;
        rollback();
        return false;
      }
      case SlotKind::kAttrList: {
        if (ti >= toks_.size()) return false;
        // Longest value run first.
        for (size_t take = std::min(schema_.dimension_count(),
                                    toks_.size() - ti);
             take >= 1; --take) {
          std::set<size_t> dims;
          bool has_noun = false;
          bool ok = true;
          for (size_t i = 0; i < take; ++i) {
            const std::string& tok = toks_[ti + i];
            if (lenient_) {
              if (tok == "object") {
                ok = false;  // the filler never doubles as a value
                break;
              }
              continue;
            }
            auto dim = schema_.value_dimension(tok);
            if (!dim || !dims.insert(*dim).second) {
              ok = false;
              break;
            }
            if (noun_dim_ && *dim == *noun_dim_) has_noun = true;
          }
          if (!ok) continue;
          size_t next = ti + take;
          bool need_filler = lenient_ ? false : !has_noun;
          for (int with_filler = 1; with_filler >= 0; --with_filler) {
            bool take_filler = with_filler == 1;
            if (!lenient_ && take_filler != need_filler) continue;
            if (take_filler &&
                (next >= toks_.size() || toks_[next] != "object")) {
              continue;
            }
            for (size_t i = 0; i < take; ++i) {
              args_.push_back(toks_[ti + i]);
              captures_.push_back({item.slot, toks_[ti + i]});
            }
            if (match(items, pi + 1, next + (take_filler ? 1 : 0))) {
              return true;
            }
            rollback();
          }
        }
        return false;
      }
    }
    return false;
  }

  const AttributeSchema& schema_;
  std::optional<size_t> noun_dim_;
  const std::vector<std::string>& toks_;
  bool lenient_;
  std::vector<std::string> args_;
  std::vector<Capture> captures_;
};

size_t literal_count(const CompiledForm& form) {
  size_t n = 0;
  for (const PatternItem& item : form.items) {
    if (!item.is_slot) ++n;
  }
  return n;
}

double token_overlap(const std::vector<std::string>& a,
                     const CompiledForm& form) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb;
  for (const PatternItem& item : form.items) {
    if (!item.is_slot) sb.insert(item.literal);
  }
  if (sa.empty() && sb.empty()) return 0.0;
  size_t inter = 0;
  for (const auto& t : sb) inter += sa.count(t);
  return static_cast<double>(inter) /
         static_cast<double>(sa.size() + sb.size() - inter);
}

}  // namespace

Program TemplateSet::parse_nl(std::string_view text, FunctionKind kind) const {
  std::vector<std::string> toks = tokenize(text);

  struct Hit {
    size_t template_index = 0;
    size_t literals = 0;
    std::vector<std::string> args;
  };
  std::optional<Hit> best;
  Matcher strict(*schema_, noun_dim_, toks, /*lenient=*/false);
  for (size_t i = 0; i < templates_.size(); ++i) {
    const Template& t = templates_[i];
    if (t.kind != kind) continue;
    for (const CompiledForm& form : t.forms) {
      std::vector<std::string> args;
      std::vector<Capture> captures;
      if (!strict.run(form, &args, &captures)) continue;
      size_t lits = literal_count(form);
      if (!best || lits > best->literals) {
        best = Hit{i, lits, std::move(args)};
      }
    }
  }
  if (best) {
    Program p;
    p.name = templates_[best->template_index].program_name;
    p.args = std::move(best->args);
    validate_program(p, *schema_);
    return p;
  }

  // No form matched outright. If some form's fixed words line up and only a
  // slot word is foreign, report that word; otherwise report the closest
  // templates.
  Matcher lenient(*schema_, noun_dim_, toks, /*lenient=*/true);
  for (const Template& t : templates_) {
    if (t.kind != kind) continue;
    for (const CompiledForm& form : t.forms) {
      std::vector<std::string> args;
      std::vector<Capture> captures;
      if (!lenient.run(form, &args, &captures)) continue;
      for (const Capture& c : captures) {
        const std::string& tok = c.token;
        bool valid;
        switch (c.slot) {
          case SlotKind::kAttrType:
            valid = schema_->has_dimension(tok);
            break;
          case SlotKind::kPos:
            valid = true;
            break;
          default:
            valid = schema_->has_value(tok) ||
                    schema_->has_value(strip_plural(tok));
            break;
        }
        if (!valid) {
          throw SchemaError("'" + tok + "' is not part of the attribute "
                            "vocabulary (while matching '" + form.pattern +
                            "')");
        }
      }
    }
  }

  std::vector<std::pair<double, const CompiledForm*>> scored;
  for (const Template& t : templates_) {
    if (t.kind != kind) continue;
    for (const CompiledForm& form : t.forms) {
      scored.emplace_back(token_overlap(toks, form), &form);
    }
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> suggestions;
  for (size_t i = 0; i < scored.size() && suggestions.size() < 3; ++i) {
    suggestions.push_back(scored[i].second->pattern);
  }
  std::string msg = "no template matches '" + std::string(text) + "'";
  if (!suggestions.empty()) {
    msg += "; closest forms:";
    for (const std::string& s : suggestions) msg += "\n  " + s;
  }
  throw NoTemplateMatchError(msg, suggestions);
}

}  // namespace vds
