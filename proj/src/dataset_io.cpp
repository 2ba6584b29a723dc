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

#include "vds/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "json.hpp"

#include "vds/dialog_gen.hpp"
#include "vds/dsl.hpp"
#include "vds/error.hpp"

namespace vds {
namespace {

using nlohmann::json;

json coref_to_json(const CorefLabel& label) {
  switch (label.kind) {
    case CorefLabel::Kind::kNone:
      return "none";
    case CorefLabel::Kind::kAll:
      return "all";
    case CorefLabel::Kind::kDistance:
      return label.distance;
  }
  return "none";
}

CorefLabel coref_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "none") return CorefLabel::none();
    if (s == "all") return CorefLabel::all();
    throw SchemaError("unknown coref label '" + s + "'");
  }
  if (j.is_number_integer()) {
    int d = j.get<int>();
    if (d < 1) throw SchemaError("coref distance must be at least 1");
    return CorefLabel::dist(d);
  }
  throw SchemaError("coref label must be \"none\", \"all\", or an integer");
}

json round_to_json(const Round& r) {
  return json{{"question", r.question},
              {"program", serialize_program(r.program)},
              {"answer", r.answer},
              {"question_type", r.question_type},
              {"coref", coref_to_json(r.coref)}};
}

json dialog_to_json(const Dialog& d) {
  json rounds = json::array();
  for (const Round& r : d.rounds) rounds.push_back(round_to_json(r));
  return json{{"scene_id", d.scene_id},
              {"seed", d.seed},
              {"ambiguous_caption", d.ambiguous_caption},
              {"caption", d.caption},
              {"caption_program", serialize_program(d.caption_program)},
              {"rounds", std::move(rounds)}};
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw SchemaError(std::string("dataset entry is missing '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("dataset field '") + key +
                      "' has the wrong type");
  }
}

Program checked_program(const std::string& text, const AttributeSchema& schema,
                        FunctionKind kind) {
  Program p = parse_program(text);
  const FunctionSignature& sig = Registry::instance().at(p.name);
  if (sig.kind != kind) {
    throw SchemaError("'" + p.name + "' is not a " +
                      (kind == FunctionKind::kCaption ? std::string("caption")
                                                      : std::string("question")) +
                      " function");
  }
  validate_program(p, schema);
  return p;
}

Dialog dialog_from_json(const json& j, const AttributeSchema& schema) {
  Dialog d;
  d.scene_id = require<int>(j, "scene_id");
  d.seed = require<uint64_t>(j, "seed");
  d.ambiguous_caption = require<bool>(j, "ambiguous_caption");
  d.caption = require<std::string>(j, "caption");
  d.caption_program = checked_program(require<std::string>(j, "caption_program"),
                                      schema, FunctionKind::kCaption);
  if (!j.contains("rounds") || !j.at("rounds").is_array()) {
    throw SchemaError("dialog entry is missing its 'rounds' array");
  }
  for (const json& rj : j.at("rounds")) {
    Round r;
    r.question = require<std::string>(rj, "question");
    r.program = checked_program(require<std::string>(rj, "program"), schema,
                                FunctionKind::kQuestion);
    r.answer = require<std::string>(rj, "answer");
    r.question_type = require<std::string>(rj, "question_type");
    if (!rj.contains("coref")) {
      throw SchemaError("round entry is missing 'coref'");
    }
    r.coref = coref_from_json(rj.at("coref"));
    d.rounds.push_back(std::move(r));
  }
  return d;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what(), e.byte);
  }
}

Dataset parse_dataset(const json& doc) {
  if (!doc.is_object() || !doc.contains("version")) {
    throw SchemaError("dataset document has no 'version' field");
  }
  if (!doc.at("version").is_number_integer() ||
      doc.at("version").get<int>() != 1) {
    throw SchemaError("unsupported dataset version (expected 1)");
  }
  if (!doc.contains("schema")) {
    throw SchemaError("dataset document has no 'schema' field");
  }
  Dataset ds{AttributeSchema::from_json(doc.at("schema")), {}};
  if (!doc.contains("dialogs") || !doc.at("dialogs").is_array()) {
    throw SchemaError("dataset document has no 'dialogs' array");
  }
  for (const json& dj : doc.at("dialogs")) {
    ds.dialogs.push_back(dialog_from_json(dj, ds.schema));
  }
  return ds;
}

}  // namespace

void write_dataset(const Dataset& dataset, const std::string& path) {
  json doc;
  doc["version"] = 1;
  doc["schema"] = dataset.schema.to_json();
  json dialogs = json::array();
  for (const Dialog& d : dataset.dialogs) dialogs.push_back(dialog_to_json(d));
  doc["dialogs"] = std::move(dialogs);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

Dataset read_dataset(const std::string& path) {
  return parse_dataset(read_json_file(path));
}

Dataset read_dataset(const std::string& path, const std::vector<Scene>& scenes,
                     double replay_fraction) {
  Dataset ds = read_dataset(path);
  if (replay_fraction <= 0.0 || ds.dialogs.empty()) return ds;
  std::unordered_map<int, const Scene*> by_id;
  for (const Scene& s : scenes) by_id.emplace(s.id, &s);
  size_t stride = replay_fraction >= 1.0
                      ? 1
                      : static_cast<size_t>(std::llround(1.0 / replay_fraction));
  if (stride == 0) stride = 1;
  for (size_t i = 0; i < ds.dialogs.size(); i += stride) {
    const Dialog& d = ds.dialogs[i];
    auto it = by_id.find(d.scene_id);
    if (it == by_id.end()) {
      throw MissingSceneError("dialog " + std::to_string(i) +
                              " references scene " +
                              std::to_string(d.scene_id) +
                              ", which is not in the scene file");
    }
    replay_dialog(d, *it->second, ds.schema, static_cast<int>(i));
  }
  return ds;
}

}  // namespace vds
