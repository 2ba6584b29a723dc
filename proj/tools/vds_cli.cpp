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
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vds/dataset_io.hpp"
#include "vds/dialog_gen.hpp"
#include "vds/dsl.hpp"
#include "vds/error.hpp"
#include "vds/eval.hpp"
#include "vds/executor.hpp"
#include "vds/kb.hpp"
#include "vds/rng.hpp"
#include "vds/scene_gen.hpp"
#include "vds/scene_io.hpp"
#include "vds/templates.hpp"
#include "vds/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitExecution = 4;
constexpr int kExitIo = 5;

std::string utc_timestamp() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every artifact-producing subcommand drops one of these next to its output.
void write_manifest(const std::string& command_line,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    std::optional<uint64_t> seed,
                    const std::string& main_output) {
  json in = json::object();
  for (const std::string& path : inputs) {
    in[path] = vds::hex64(vds::fnv1a_file(path));
  }
  json doc{{"command", command_line},
           {"tool_version", vds::kVersion},
           {"inputs", std::move(in)},
           {"outputs", outputs},
           {"timestamp", utc_timestamp()}};
  if (seed) doc["seed"] = *seed;
  std::string path = main_output + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw vds::IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

struct ObjectRange {
  int min = 3;
  int max = 10;
};

ObjectRange parse_object_range(const std::string& text) {
  ObjectRange r;
  size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      r.min = r.max = std::stoi(text);
    } else {
      r.min = std::stoi(text.substr(0, dots));
      r.max = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw vds::ArgumentError("--objects expects MIN..MAX, got '" + text + "'");
  }
  if (r.min < 1 || r.max < r.min ||
      r.max > static_cast<int>(vds::kDefaultMaxEntities)) {
    throw vds::ArgumentError(
        "--objects range must satisfy 1 <= MIN <= MAX <= " +
        std::to_string(vds::kDefaultMaxEntities));
  }
  return r;
}

void apply_restriction(const std::string& text, const vds::AttributeSchema& schema,
                       vds::SceneGenConfig* cfg) {
  size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size()) {
    throw vds::ArgumentError("--restrict expects dim=v1,v2,..., got '" + text +
                             "'");
  }
  std::string dim = text.substr(0, eq);
  size_t d = schema.require_dimension(dim);
  std::vector<std::string> values;
  std::stringstream ss(text.substr(eq + 1));
  std::string v;
  while (std::getline(ss, v, ',')) {
    if (v.empty()) continue;
    if (!schema.is_value_of(d, v)) {
      throw vds::ArgumentError("'" + v + "' is not a " + dim + " value");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw vds::ArgumentError("--restrict " + dim + " lists no values");
  }
  cfg->allowed_values[dim] = std::move(values);
}

int run_gen_scenes(const std::string& command_line, int count,
                   const std::string& objects, uint64_t seed,
                   const std::vector<std::string>& restrictions,
                   const std::string& output) {
  vds::AttributeSchema schema = vds::AttributeSchema::default_schema();
  ObjectRange range = parse_object_range(objects);
  vds::SceneGenConfig cfg;
  for (const std::string& r : restrictions) {
    apply_restriction(r, schema, &cfg);
  }
  vds::Rng size_rng(vds::Rng::derive(seed, 0x5ce7e5));
  std::vector<vds::Scene> scenes;
  scenes.reserve(count);
  for (int i = 0; i < count; ++i) {
    cfg.n_objects =
        range.min + static_cast<int>(size_rng.below(range.max - range.min + 1));
    scenes.push_back(
        vds::generate_scene(schema, cfg, vds::Rng::derive(seed, i + 1), i));
  }
  vds::save_scenes(output, scenes, schema);
  write_manifest(command_line, {}, {output}, seed, output);
  std::cout << "wrote " << scenes.size() << " scenes to " << output << "\n";
  return kExitOk;
}

std::vector<std::string> load_function_subset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vds::IoError("cannot open '" + path + "' for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw vds::ParseError("invalid JSON in '" + path + "': " + e.what(),
                          e.byte);
  }
  const json* list = nullptr;
  if (doc.is_array()) {
    list = &doc;
  } else if (doc.is_object() && doc.contains("functions") &&
             doc.at("functions").is_array()) {
    list = &doc.at("functions");
  } else {
    throw vds::SchemaError(
        "function subset file needs a top-level array or a 'functions' array");
  }
  std::vector<std::string> names;
  for (const json& item : *list) {
    if (!item.is_string()) {
      throw vds::SchemaError("function subset entries must be strings");
    }
    std::string name = item.get<std::string>();
    const vds::FunctionSignature& sig = vds::Registry::instance().at(name);
    if (sig.kind != vds::FunctionKind::kQuestion) {
      throw vds::ArgumentError("'" + name +
                               "' is a caption function; the subset may list "
                               "only question functions");
    }
    names.push_back(sig.name);
  }
  return names;
}

int run_gen_dialogs(const std::string& command_line, const std::string& scenes_path,
                    int per_scene, int rounds, uint64_t seed,
                    const std::string& functions_path,
                    const std::string& output) {
  vds::AttributeSchema schema = vds::AttributeSchema::default_schema();
  vds::DialogGenConfig cfg;
  cfg.rounds = rounds;
  std::vector<std::string> inputs{scenes_path};
  if (!functions_path.empty()) {
    cfg.allowed_questions = load_function_subset(functions_path);
    inputs.push_back(functions_path);
  }
  std::vector<vds::Scene> scenes = vds::load_scenes(scenes_path, schema);
  if (scenes.empty()) {
    throw vds::EmptyInputError("scene file '" + scenes_path +
                               "' contains no scenes");
  }
  vds::TemplateSet templates = vds::TemplateSet::builtin(schema);
  vds::Dataset ds{schema, {}};
  ds.dialogs.reserve(scenes.size() * per_scene);
  uint64_t ordinal = 0;
  for (const vds::Scene& scene : scenes) {
    for (int k = 0; k < per_scene; ++k, ++ordinal) {
      ds.dialogs.push_back(vds::generate_dialog(
          scene, schema, templates, cfg, vds::Rng::derive(seed, ordinal)));
    }
  }
  vds::write_dataset(ds, output);
  write_manifest(command_line, inputs, {output}, seed, output);
  std::cout << "wrote " << ds.dialogs.size() << " dialogs ("
            << scenes.size() << " scenes x " << per_scene << ", L=" << rounds
            << ") to " << output << "\n";
  return kExitOk;
}

const vds::Scene& find_scene(const std::vector<vds::Scene>& scenes, int id) {
  for (const vds::Scene& s : scenes) {
    if (s.id == id) return s;
  }
  throw vds::MissingSceneError("no scene with id " + std::to_string(id));
}

int run_exec(const std::string& scenes_path, int scene_id,
             const std::string& caption,
             const std::vector<std::string>& programs) {
  vds::AttributeSchema schema = vds::AttributeSchema::default_schema();
  std::vector<vds::Scene> scenes = vds::load_scenes(scenes_path, schema);
  const vds::Scene& scene = find_scene(scenes, scene_id);
  vds::KnowledgeBase kb = vds::init_kb(scene, schema);
  if (!caption.empty()) {
    vds::Program p = vds::parse_program(caption);
    vds::CaptionResult res = vds::execute_caption(kb, p);
    std::cout << "caption: " << vds::serialize_program(p)
              << (res.ambiguous ? "   [ambiguous referent]" : "") << "\n"
              << kb.dump() << "\n";
  }
  for (const std::string& text : programs) {
    vds::Program p = vds::parse_program(text);
    kb.begin_round();
    vds::Answer a = vds::execute_question(kb, p);
    std::cout << "round " << kb.round() << ": " << vds::serialize_program(p)
              << " -> " << a.str() << "\n"
              << kb.dump() << "\n";
  }
  return kExitOk;
}

vds::HistoryWindow parse_window(const std::string& text) {
  if (text == "all") return vds::HistoryWindow::everything();
  try {
    size_t used = 0;
    int n = std::stoi(text, &used);
    if (used == text.size() && n >= 0) return vds::HistoryWindow::last(n);
  } catch (const std::exception&) {
  }
  throw vds::ArgumentError("--window expects 'all' or a non-negative integer, "
                           "got '" +
                           text + "'");
}

std::vector<vds::HistoryWindow> parse_window_list(const std::string& text) {
  std::vector<vds::HistoryWindow> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_window(item));
  }
  if (out.empty()) {
    throw vds::ArgumentError("--sweep-windows lists no windows");
  }
  return out;
}

std::string csv_path_for(const std::string& report_path) {
  const std::string suffix = ".json";
  if (report_path.size() > suffix.size() &&
      report_path.compare(report_path.size() - suffix.size(), suffix.size(),
                          suffix) == 0) {
    return report_path.substr(0, report_path.size() - suffix.size()) + ".csv";
  }
  return report_path + ".csv";
}

int run_evaluate(const std::string& command_line, const std::string& dialogs_path,
                 const std::string& scenes_path, const std::string& model_spec,
                 const std::string& scheme_text, const std::string& window_text,
                 const std::string& sweep_text, const std::string& output) {
  vds::EvaluationConfig cfg;
  if (scheme_text == "gt") {
    cfg.scheme = vds::HistoryScheme::kGtHistory;
  } else if (scheme_text == "pred") {
    cfg.scheme = vds::HistoryScheme::kPredHistory;
  } else {
    throw vds::ArgumentError("--scheme expects 'gt' or 'pred', got '" +
                             scheme_text + "'");
  }
  cfg.window = parse_window(window_text);

  vds::Dataset ds = vds::read_dataset(dialogs_path);
  std::vector<vds::Scene> scenes = vds::load_scenes(scenes_path, ds.schema);

  vds::TemplateSet templates = vds::TemplateSet::builtin(ds.schema);
  std::unique_ptr<vds::DialogModel> model;
  std::vector<std::string> inputs{dialogs_path, scenes_path};
  if (model_spec == "symbolic") {
    model = std::make_unique<vds::SymbolicModel>(templates);
  } else if (model_spec == "oracle") {
    model = std::make_unique<vds::OracleModel>(ds);
  } else if (model_spec.rfind("stub:", 0) == 0) {
    std::string table = model_spec.substr(5);
    model = std::make_unique<vds::TableModel>(vds::TableModel::load(table));
    inputs.push_back(table);
  } else {
    throw vds::ArgumentError(
        "--model expects 'symbolic', 'oracle', or 'stub:FILE', got '" +
        model_spec + "'");
  }

  vds::ReportMeta meta{dialogs_path, scenes_path, model->name()};
  if (!sweep_text.empty()) {
    std::vector<vds::HistoryWindow> windows = parse_window_list(sweep_text);
    vds::SweepReport sweep =
        vds::sweep_history_window(ds, scenes, *model, windows, cfg);
    json doc{{"sweep", sweep.to_json()},
             {"meta",
              {{"config", vds::config_to_json(cfg)},
               {"model", meta.model},
               {"dataset", dialogs_path},
               {"dataset_hash", vds::hex64(vds::fnv1a_file(dialogs_path))},
               {"scenes", scenes_path},
               {"scenes_hash", vds::hex64(vds::fnv1a_file(scenes_path))},
               {"tool_version", vds::kVersion},
               {"timestamp", utc_timestamp()}}}};
    std::ofstream out(output);
    if (!out) throw vds::IoError("cannot open '" + output + "' for writing");
    out << doc.dump(2) << '\n';
    write_manifest(command_line, inputs, {output}, std::nullopt, output);
    for (const vds::SweepCell& cell : sweep.cells) {
      std::cout << "window=" << cell.window.str() << " scheme="
                << (cell.scheme == vds::HistoryScheme::kGtHistory ? "gt"
                                                                  : "pred")
                << " accuracy=" << cell.report.overall_accuracy
                << " nffr=" << cell.report.nffr_value << "\n";
    }
    return kExitOk;
  }

  vds::EvaluationReport report = vds::evaluate(ds, scenes, *model, cfg);
  std::string csv = csv_path_for(output);
  vds::write_report(report, cfg, meta, output);
  vds::write_round_csv(report, csv);
  write_manifest(command_line, inputs, {output, csv}, std::nullopt, output);
  std::cout << "accuracy " << report.overall_accuracy << "\n"
            << "nffr " << report.nffr_value << "\n";
  return kExitOk;
}

// Lines present in `now` but not in `before`, prefixed '+', and vice versa
// prefixed '-'. Good enough to show what a turn changed.
void print_kb_delta(const std::string& before, const std::string& now) {
  auto split = [](const std::string& s) {
    std::vector<std::string> lines;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
  };
  std::vector<std::string> a = split(before);
  std::vector<std::string> b = split(now);
  for (const std::string& line : a) {
    if (std::find(b.begin(), b.end(), line) == b.end()) {
      std::cout << "  - " << line << "\n";
    }
  }
  for (const std::string& line : b) {
    if (std::find(a.begin(), a.end(), line) == a.end()) {
      std::cout << "  + " << line << "\n";
    }
  }
}

int run_repl(const std::string& scenes_path, int scene_id) {
  vds::AttributeSchema schema = vds::AttributeSchema::default_schema();
  std::vector<vds::Scene> scenes = vds::load_scenes(scenes_path, schema);
  const vds::Scene& scene = find_scene(scenes, scene_id);
  vds::TemplateSet templates = vds::TemplateSet::builtin(schema);
  vds::KnowledgeBase kb = vds::init_kb(scene, schema);
  bool have_caption = false;
  std::string prev_dump = kb.dump();
  std::cout << "scene " << scene_id << " with " << scene.entity_count()
            << " objects; enter a caption (natural language, or ! followed by "
               "a program). :kb dumps state, :quit exits.\n";
  std::string line;
  while (true) {
    std::cout << (have_caption ? "q> " : "caption> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (line == ":quit") break;
    if (line == ":kb") {
      std::cout << kb.dump();
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      vds::Program p;
      if (!line.empty() && line[0] == '!') {
        p = vds::parse_program(line.substr(1));
      } else {
        p = templates.parse_nl(line, have_caption
                                         ? vds::FunctionKind::kQuestion
                                         : vds::FunctionKind::kCaption);
      }
      std::cout << "  parsed: " << vds::serialize_program(p) << "\n";
      const vds::FunctionSignature& sig = vds::Registry::instance().at(p.name);
      if (sig.kind == vds::FunctionKind::kCaption) {
        vds::CaptionResult res = vds::execute_caption(kb, p);
        if (res.ambiguous) std::cout << "  note: ambiguous referent\n";
        have_caption = true;
      } else {
        kb.begin_round();
        vds::Answer a = vds::execute_question(kb, p);
        std::cout << "  answer: " << a.str() << "\n";
      }
      std::string now = kb.dump();
      print_kb_delta(prev_dump, now);
      prev_dump = std::move(now);
    } catch (const vds::NoTemplateMatchError& e) {
      std::cout << "  error (" << e.code() << "): " << e.what() << "\n";
      for (const std::string& s : e.suggestions()) {
        std::cout << "    closest: " << s << "\n";
      }
    } catch (const vds::SyntaxError& e) {
      std::cout << "  error (" << e.code() << ") at position " << e.position()
                << ": " << e.what() << "\n";
    } catch (const vds::Error& e) {
      std::cout << "  error (" << e.code() << "): " << e.what() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic visual-dialog engine: scene and dialog generation, "
               "program execution, and model evaluation"};
  app.set_version_flag("--version", vds::kVersion);
  app.require_subcommand(1);
  std::string command_line = join_args(argc, argv);

  auto* gs = app.add_subcommand("gen-scenes", "Generate random scenes");
  int gs_count = 0;
  std::string gs_objects = "3..10";
  uint64_t gs_seed = 0;
  std::vector<std::string> gs_restrict;
  std::string gs_output;
  gs->add_option("--count", gs_count, "Number of scenes")
      ->required()
      ->check(CLI::PositiveNumber);
  gs->add_option("--objects", gs_objects, "Objects per scene, MIN..MAX");
  gs->add_option("--seed", gs_seed, "Generation seed")->required();
  gs->add_option("--restrict", gs_restrict,
                 "Limit a dimension to listed values, dim=v1,v2,...");
  gs->add_option("-o,--output", gs_output, "Output scene file")->required();

  auto* gd = app.add_subcommand("gen-dialogs", "Generate annotated dialogs");
  std::string gd_scenes;
  int gd_per_scene = 0;
  int gd_rounds = 0;
  uint64_t gd_seed = 0;
  std::string gd_functions;
  std::string gd_output;
  gd->add_option("--scenes", gd_scenes, "Scene file")->required();
  gd->add_option("--per-scene", gd_per_scene, "Dialogs per scene")
      ->required()
      ->check(CLI::PositiveNumber);
  gd->add_option("--rounds", gd_rounds, "Rounds per dialog")
      ->required()
      ->check(CLI::PositiveNumber);
  gd->add_option("--seed", gd_seed, "Generation seed")->required();
  gd->add_option("--functions", gd_functions,
                 "JSON file listing the allowed question functions");
  gd->add_option("-o,--output", gd_output, "Output dataset file")->required();

  auto* ex = app.add_subcommand("exec", "Execute programs against one scene");
  std::string ex_scenes;
  int ex_scene_id = 0;
  std::string ex_caption;
  std::vector<std::string> ex_programs;
  ex->add_option("--scenes", ex_scenes, "Scene file")->required();
  ex->add_option("--scene-id", ex_scene_id, "Scene id")->required();
  ex->add_option("--caption", ex_caption, "Caption program text");
  ex->add_option("--program", ex_programs, "Question program text (repeatable)");

  auto* ev = app.add_subcommand("evaluate", "Evaluate a model over a dataset");
  std::string ev_dialogs;
  std::string ev_scenes;
  std::string ev_model = "symbolic";
  std::string ev_scheme = "gt";
  std::string ev_window = "all";
  std::string ev_sweep;
  std::string ev_output;
  ev->add_option("--dialogs", ev_dialogs, "Dataset file")->required();
  ev->add_option("--scenes", ev_scenes, "Scene file")->required();
  ev->add_option("--model", ev_model, "symbolic | oracle | stub:FILE");
  ev->add_option("--scheme", ev_scheme, "History answers: gt | pred");
  ev->add_option("--window", ev_window, "History window: all | N");
  ev->add_option("--sweep-windows", ev_sweep,
                 "Comma list of windows; evaluates each under both schemes");
  ev->add_option("-o,--output", ev_output, "Report file")->required();

  auto* rp = app.add_subcommand("repl", "Interactive dialog probe");
  std::string rp_scenes;
  int rp_scene_id = 0;
  rp->add_option("--scenes", rp_scenes, "Scene file")->required();
  rp->add_option("--scene-id", rp_scene_id, "Scene id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gs->parsed()) {
      return run_gen_scenes(command_line, gs_count, gs_objects, gs_seed,
                            gs_restrict, gs_output);
    }
    if (gd->parsed()) {
      return run_gen_dialogs(command_line, gd_scenes, gd_per_scene, gd_rounds,
                             gd_seed, gd_functions, gd_output);
    }
    if (ex->parsed()) {
      return run_exec(ex_scenes, ex_scene_id, ex_caption, ex_programs);
    }
    if (ev->parsed()) {
      return run_evaluate(command_line, ev_dialogs, ev_scenes, ev_model,
                          ev_scheme, ev_window, ev_sweep, ev_output);
    }
    if (rp->parsed()) {
      return run_repl(rp_scenes, rp_scene_id);
    }
  } catch (const vds::ArgumentError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitConfig;
  } catch (const vds::GenerationError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitGeneration;
  } catch (const vds::SyntaxError& e) {
    std::cerr << "error (" << e.code() << ") at position " << e.position()
              << ": " << e.what() << "\n";
    return kExitExecution;
  } catch (const vds::ExecutionError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitExecution;
  } catch (const vds::NoTemplateMatchError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitExecution;
  } catch (const vds::UnknownFunctionError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitExecution;
  } catch (const vds::ParseError& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitIo;
  } catch (const vds::Error& e) {
    std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
