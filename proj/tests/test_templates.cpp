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

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vds/error.hpp"
#include "vds/rng.hpp"
#include "vds/templates.hpp"

using namespace vds;

namespace {

const AttributeSchema& schema() { return AttributeSchema::default_schema(); }

const TemplateSet& builtin() {
  static TemplateSet t = TemplateSet::builtin(schema());
  return t;
}

const std::vector<std::string> kPositions = {"right", "left", "front",
                                             "behind"};

// One random argument tuple for the signature; attr_list captions get a
// random non-empty dimension subset in canonical order.
std::vector<std::string> sample_args(const FunctionSignature& sig, Rng& rng) {
  const AttributeSchema& s = schema();
  std::vector<std::string> args;
  if (sig.has_attr_list()) {
    uint64_t bits = 1 + rng.below((1ull << s.dimension_count()) - 1);
    for (size_t d = 0; d < s.dimension_count(); ++d) {
      if (bits & (1ull << d)) args.push_back(rng.pick(s.values(d)));
    }
    return args;
  }
  for (ArgKind kind : sig.args) {
    switch (kind) {
      case ArgKind::kAttr: {
        size_t d = rng.index(s.dimension_count());
        args.push_back(rng.pick(s.values(d)));
        break;
      }
      case ArgKind::kAttrType:
        args.push_back(s.dimension(rng.index(s.dimension_count())));
        break;
      case ArgKind::kPos:
        args.push_back(rng.pick(kPositions));
        break;
      default:
        break;
    }
  }
  return args;
}

bool same_program(const FunctionSignature& sig, const Program& a,
                  const Program& b) {
  if (a.name != b.name) return false;
  if (!sig.has_attr_list()) return a.args == b.args;
  auto sa = a.args, sb = b.args;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace

TEST_CASE("frozen surface forms") {
  const TemplateSet& t = builtin();
  CHECK(t.render(parse_program("extreme-centre(small, cylinder)"), 0) ==
        "There is a small cylinder in the center");
  CHECK(t.render(parse_program("seek-attr-imm(colour)"), 0) ==
        "What is its colour?");
  CHECK(t.render(parse_program("exist-obj-exclude-early(shape, cube)"), 1) ==
        "Is there any other thing with the same shape as the earlier cube?");
  CHECK(t.render(parse_program("count-att(red)"), 0) ==
        "There are red objects in the scene");
  CHECK(t.render(parse_program("count-att(cube)"), 0) ==
        "There are cubes in the scene");
  CHECK(t.render(parse_program("unique-obj(small)"), 0) ==
        "There is a small object");
  CHECK(t.render(parse_program("obj-relation(red, front, cube)"), 0) ==
        "There is a red object in front of a cube");
  CHECK(t.render(parse_program("count-attribute-group(metal)"), 0) ==
        "How many of them are metal?");
  CHECK(t.render(parse_program("count-attribute-group(sphere)"), 0) ==
        "How many of them are spheres?");
  CHECK(t.render(parse_program("seek-attr-rel-imm(size, behind)"), 0) ==
        "What is the size of the object behind it?");
}

TEST_CASE("every template covers every function with at least two forms") {
  const TemplateSet& t = builtin();
  const Registry& reg = Registry::instance();
  CHECK(t.templates().size() == reg.all().size());
  for (const FunctionSignature& sig : reg.all()) {
    CHECK(t.variant_count(sig.name) >= 2);
  }
  CHECK_THROWS_AS(t.variant_count("no-such-function"), UnknownFunctionError);
}

TEST_CASE("questions end in a question mark, captions do not") {
  const TemplateSet& t = builtin();
  Rng rng(7);
  for (const FunctionSignature& sig : Registry::instance().all()) {
    for (size_t v = 0; v < t.variant_count(sig.name); ++v) {
      Program p;
      p.name = sig.name;
      p.args = sample_args(sig, rng);
      std::string text = t.render(p, v);
      REQUIRE_FALSE(text.empty());
      if (sig.kind == FunctionKind::kQuestion) {
        CHECK(text.back() == '?');
      } else {
        CHECK(text.back() != '?');
      }
      CHECK(std::isupper(static_cast<unsigned char>(text.front())));
    }
  }
}

TEST_CASE("render and parse are inverse over all functions and variants") {
  const TemplateSet& t = builtin();
  Rng rng(20260814);
  for (const FunctionSignature& sig : Registry::instance().all()) {
    for (size_t v = 0; v < t.variant_count(sig.name); ++v) {
      for (int trial = 0; trial < 40; ++trial) {
        Program p;
        p.name = sig.name;
        p.args = sample_args(sig, rng);
        std::string text = t.render(p, v);
        Program back = t.parse_nl(text, sig.kind);
        CAPTURE(text);
        CHECK(same_program(sig, p, back));
      }
    }
  }
}

TEST_CASE("variant index wraps modulo the form count") {
  const TemplateSet& t = builtin();
  Program p = parse_program("count-all");
  size_t n = t.variant_count("count-all");
  CHECK(t.render(p, 0) == t.render(p, n));
  CHECK(t.render(p, 1) == t.render(p, n + 1));
  CHECK(t.render(p, 1) != t.render(p, 0));
}

TEST_CASE("parsing is case- and punctuation-insensitive") {
  const TemplateSet& t = builtin();
  Program a = t.parse_nl("WHAT IS ITS COLOUR", FunctionKind::kQuestion);
  CHECK(serialize_program(a) == "seek-attr-imm(colour)");
  Program b = t.parse_nl("  what is its colour?!  ", FunctionKind::kQuestion);
  CHECK(serialize_program(b) == "seek-attr-imm(colour)");
  Program c = t.parse_nl("there IS a Small Cylinder in the Center.",
                         FunctionKind::kCaption);
  CHECK(serialize_program(c) == "extreme-centre(small, cylinder)");
}

TEST_CASE("pronoun and reference phrases track the referent mode") {
  const TemplateSet& t = builtin();
  auto has_token = [](const CompiledForm& f, const std::string& w) {
    return std::any_of(f.items.begin(), f.items.end(),
                       [&](const PatternItem& i) {
                         return !i.is_slot && i.literal == w;
                       });
  };
  for (const Template& tpl : t.templates()) {
    const FunctionSignature& sig = Registry::instance().at(tpl.program_name);
    if (sig.kind != FunctionKind::kQuestion) continue;
    for (const CompiledForm& f : tpl.forms) {
      bool pronoun = has_token(f, "it") || has_token(f, "its");
      bool previous = has_token(f, "previous");
      CHECK(pronoun == (sig.ref == RefMode::kSubject));
      CHECK(previous == (sig.ref == RefMode::kPrevSubject));
      if (has_token(f, "earlier")) CHECK(sig.ref == RefMode::kFetch);
    }
  }
}

TEST_CASE("foreign slot tokens are vocabulary errors, not mismatches") {
  const TemplateSet& t = builtin();
  CHECK_THROWS_AS(t.parse_nl("What is its flavour?", FunctionKind::kQuestion),
                  SchemaError);
  CHECK_THROWS_AS(
      t.parse_nl("How many taupe objects are there?", FunctionKind::kQuestion),
      SchemaError);
}

TEST_CASE("unmatched text suggests the three closest forms") {
  const TemplateSet& t = builtin();
  try {
    t.parse_nl("Could you tell me about the scene please",
               FunctionKind::kQuestion);
    FAIL("expected NoTemplateMatchError");
  } catch (const NoTemplateMatchError& e) {
    CHECK(e.suggestions().size() == 3);
    CHECK(std::string(e.what()).find("closest") != std::string::npos);
  }
  // The kind filter applies: a caption sentence is no question.
  CHECK_THROWS_AS(t.parse_nl("There is a small cylinder in the center",
                             FunctionKind::kQuestion),
                  NoTemplateMatchError);
}

TEST_CASE("longest literal match wins among competing forms") {
  const TemplateSet& t = builtin();
  // "How many objects are there in the scene" must bind count-all, not any
  // shorter competing count form.
  Program p = t.parse_nl("How many objects are there in the scene?",
                         FunctionKind::kQuestion);
  CHECK(p.name == "count-all");
  Program q = t.parse_nl("How many other objects are there?",
                         FunctionKind::kQuestion);
  CHECK(q.name == "count-other");
}

TEST_CASE("render validates the program before rendering") {
  const TemplateSet& t = builtin();
  Program p;
  p.name = "seek-attr-imm";
  p.args = {"red"};  // a value where a dimension name belongs
  CHECK_THROWS_AS(t.render(p, 0), ArgumentError);
  Program q;
  q.name = "unique-obj";
  q.args = {"small", "large"};  // duplicate dimension
  CHECK_THROWS_AS(t.render(q, 0), ArgumentError);
}

TEST_CASE("template JSON round-trips and loads from disk") {
  const TemplateSet& t = builtin();
  nlohmann::json j = t.to_json();
  TemplateSet again = TemplateSet::from_json(j, schema());
  Program p = parse_program("seek-attr-early(material, red)");
  for (size_t v = 0; v < 2; ++v) {
    CHECK(t.render(p, v) == again.render(p, v));
  }

  // A modified form on disk takes effect after loading.
  j["templates"][0]["forms"][0] = "Mind you there are {attr_nps} around";
  std::string path = "tmp_templates.json";
  {
    std::ofstream out(path);
    out << j.dump();
  }
  TemplateSet custom = TemplateSet::load(path, schema());
  CHECK(custom.render(parse_program("count-att(red)"), 0) ==
        "Mind you there are red objects around");
  CHECK(custom.parse_nl("mind you there are red objects around",
                        FunctionKind::kCaption)
            .name == "count-att");
  std::remove(path.c_str());

  CHECK_THROWS_AS(TemplateSet::load("no/such/file.json", schema()), IoError);
}

TEST_CASE("template validation rejects malformed inventories") {
  nlohmann::json base = builtin().to_json();

  nlohmann::json j = base;
  j["templates"][0]["kind"] = "statement";
  CHECK_THROWS_AS(TemplateSet::from_json(j, schema()), SchemaError);

  j = base;
  j["templates"][0]["forms"][0] = "There are {bogus_slot} here";
  CHECK_THROWS_AS(TemplateSet::from_json(j, schema()), SchemaError);

  j = base;  // slot arity mismatch: seek-attr-imm takes one attr_type
  for (auto& tpl : j["templates"]) {
    if (tpl["program"] == "seek-attr-imm") {
      tpl["forms"][0] = "What is its {attr_type} and {attr_type}";
    }
  }
  CHECK_THROWS_AS(TemplateSet::from_json(j, schema()), SchemaError);

  j = base;  // duplicate template entry
  j["templates"].push_back(j["templates"][0]);
  CHECK_THROWS_AS(TemplateSet::from_json(j, schema()), SchemaError);

  j = base;  // dropping a function leaves it uncovered
  j["templates"].erase(0);
  CHECK_THROWS_AS(TemplateSet::from_json(j, schema()), SchemaError);

  CHECK_THROWS_AS(TemplateSet::from_json(nlohmann::json::array(), schema()),
                  SchemaError);
}

TEST_CASE("attr_list renders in canonical dimension order regardless of "
          "argument order") {
  const TemplateSet& t = builtin();
  Program a = parse_program("unique-obj(cube, red, small)");
  Program b = parse_program("unique-obj(small, red, cube)");
  CHECK(t.render(a, 0) == "There is a small red cube");
  CHECK(t.render(a, 0) == t.render(b, 0));
}
