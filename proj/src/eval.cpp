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

#include "vds/eval.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <thread>

#include "vds/dsl.hpp"
#include "vds/error.hpp"
#include "vds/executor.hpp"
#include "vds/kb.hpp"
#include "vds/metrics.hpp"
#include "vds/version.hpp"

namespace vds {

using nlohmann::json;

std::string normalize_answer(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  std::string out;
  out.reserve(end - begin);
  for (size_t i = begin; i < end; ++i) {
    out.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(text[i]))));
  }
  return out;
}

bool CorefBin::contains(const CorefLabel& label) const {
  switch (kind) {
    case Kind::kNone:
      return label.kind == CorefLabel::Kind::kNone;
    case Kind::kAll:
      return label.kind == CorefLabel::Kind::kAll;
    case Kind::kRange:
      return label.kind == CorefLabel::Kind::kDistance &&
             label.distance >= min && label.distance <= max;
  }
  return false;
}

std::vector<CorefBin> default_coref_bins() {
  return {
      {"none", CorefBin::Kind::kNone, 0, 0},
      {"1", CorefBin::Kind::kRange, 1, 1},
      {"2", CorefBin::Kind::kRange, 2, 2},
      {"3", CorefBin::Kind::kRange, 3, 3},
      {"4+", CorefBin::Kind::kRange, 4, INT_MAX},
      {"all", CorefBin::Kind::kAll, 0, 0},
  };
}

void validate_coref_bins(const std::vector<CorefBin>& bins) {
  int none_bins = 0;
  int all_bins = 0;
  std::vector<const CorefBin*> ranges;
  std::vector<std::string> names;
  for (const CorefBin& b : bins) {
    if (b.name.empty()) throw ArgumentError("coref bin with an empty name");
    names.push_back(b.name);
    switch (b.kind) {
      case CorefBin::Kind::kNone:
        ++none_bins;
        break;
      case CorefBin::Kind::kAll:
        ++all_bins;
        break;
      case CorefBin::Kind::kRange:
        if (b.min < 1 || b.max < b.min) {
          throw ArgumentError("coref bin '" + b.name + "' has an empty range");
        }
        ranges.push_back(&b);
        break;
    }
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ArgumentError("coref bins must have distinct names");
  }
  if (none_bins != 1 || all_bins != 1) {
    throw ArgumentError(
        "coref bins must contain exactly one 'none' bin and one 'all' bin");
  }
  std::sort(ranges.begin(), ranges.end(),
            [](const CorefBin* a, const CorefBin* b) { return a->min < b->min; });
  int expect = 1;
  for (const CorefBin* r : ranges) {
    if (r->min != expect) {
      throw ArgumentError("coref distance bins must tile 1.. without gaps "
                          "or overlaps (bin '" +
                          r->name + "' starts at " + std::to_string(r->min) +
                          ", expected " + std::to_string(expect) + ")");
    }
    if (r->max == INT_MAX) {
      expect = -1;
      break;
    }
    expect = r->max + 1;
  }
  if (expect != -1) {
    throw ArgumentError("the last coref distance bin must be open-ended");
  }
}

SymbolicModel::SymbolicModel(const TemplateSet& templates)
    : templates_(templates) {}

const Program& SymbolicModel::parse_cached(const std::string& text,
                                           bool caption) {
  std::string key = (caption ? "c:" : "q:") + text;
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Program p = templates_.parse_nl(
      text, caption ? FunctionKind::kCaption : FunctionKind::kQuestion);
  std::unique_lock lock(mutex_);
  return cache_.emplace(std::move(key), std::move(p)).first->second;
}

std::string SymbolicModel::answer(const Scene& scene,
                                  const std::string& caption,
                                  const std::vector<QaPair>& history,
                                  const std::string& question,
                                  const RoundContext&) {
  KnowledgeBase kb = init_kb(scene, templates_.schema());
  execute_caption(kb, parse_cached(caption, true));
  for (const QaPair& qa : history) {
    kb.begin_round();
    try {
      execute_question(kb, parse_cached(qa.question, false));
    } catch (const Error&) {
      // A history round the engine cannot reproduce contributes nothing; the
      // current question is still attempted with what is known so far.
    }
  }
  kb.begin_round();
  return execute_question(kb, parse_cached(question, false)).str();
}

std::string OracleModel::answer(const Scene&, const std::string&,
                                const std::vector<QaPair>&, const std::string&,
                                const RoundContext& ctx) {
  if (ctx.dialog_index < 0 ||
      ctx.dialog_index >= static_cast<int>(dataset_.dialogs.size())) {
    throw IndexError("oracle has no dialog " +
                     std::to_string(ctx.dialog_index));
  }
  const Dialog& d = dataset_.dialogs[ctx.dialog_index];
  if (ctx.round_index < 1 ||
      ctx.round_index > static_cast<int>(d.rounds.size())) {
    throw IndexError("oracle has no round " + std::to_string(ctx.round_index) +
                     " in dialog " + std::to_string(ctx.dialog_index));
  }
  return d.rounds[ctx.round_index - 1].answer;
}

TableModel TableModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("answers") ||
      !doc.at("answers").is_array()) {
    throw SchemaError("answer table needs an 'answers' array of arrays");
  }
  std::vector<std::vector<std::string>> answers;
  for (const json& row : doc.at("answers")) {
    if (!row.is_array()) {
      throw SchemaError("answer table rows must be arrays of strings");
    }
    std::vector<std::string> r;
    for (const json& cell : row) {
      if (!cell.is_string()) {
        throw SchemaError("answer table cells must be strings");
      }
      r.push_back(cell.get<std::string>());
    }
    answers.push_back(std::move(r));
  }
  return TableModel(std::move(answers));
}

std::string TableModel::answer(const Scene&, const std::string&,
                               const std::vector<QaPair>&, const std::string&,
                               const RoundContext& ctx) {
  if (ctx.dialog_index < 0 ||
      ctx.dialog_index >= static_cast<int>(answers_.size()) ||
      ctx.round_index < 1 ||
      ctx.round_index > static_cast<int>(answers_[ctx.dialog_index].size())) {
    throw ModelError("answer table has no entry for dialog " +
                     std::to_string(ctx.dialog_index) + ", round " +
                     std::to_string(ctx.round_index));
  }
  return answers_[ctx.dialog_index][ctx.round_index - 1];
}

int default_thread_count() {
  if (const char* env = std::getenv("VDS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) {
      return static_cast<int>(v);
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

constexpr const char* kErrorSentinel = "<error>";

size_t bin_index(const std::vector<CorefBin>& bins, const CorefLabel& label) {
  for (size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].contains(label)) return i;
  }
  throw ArgumentError("coref label '" + label.str() +
                      "' falls in no configured bin");
}

}  // namespace

EvaluationReport evaluate(const Dataset& dataset,
                          const std::vector<Scene>& scenes, DialogModel& model,
                          const EvaluationConfig& config) {
  validate_coref_bins(config.coref_bins);
  if (!config.window.all && config.window.last_n < 0) {
    throw ArgumentError("history window size must be at least 0");
  }
  if (dataset.dialogs.empty()) {
    throw EmptyInputError("evaluation needs at least one dialog");
  }
  const size_t n = dataset.dialogs.size();
  const int rounds = static_cast<int>(dataset.dialogs[0].rounds.size());
  if (rounds < 1) throw ArgumentError("dialog 0 has no rounds");
  for (size_t i = 0; i < n; ++i) {
    if (static_cast<int>(dataset.dialogs[i].rounds.size()) != rounds) {
      throw ArgumentError("dialog " + std::to_string(i) + " has " +
                          std::to_string(dataset.dialogs[i].rounds.size()) +
                          " rounds but dialog 0 has " +
                          std::to_string(rounds));
    }
  }
  std::unordered_map<int, const Scene*> by_id;
  for (const Scene& s : scenes) by_id.emplace(s.id, &s);
  for (size_t i = 0; i < n; ++i) {
    if (!by_id.count(dataset.dialogs[i].scene_id)) {
      throw MissingSceneError("dialog " + std::to_string(i) +
                              " references scene " +
                              std::to_string(dataset.dialogs[i].scene_id) +
                              ", which is not in the scene set");
    }
  }

  std::vector<std::vector<RoundOutcome>> outcomes(n);
  std::vector<std::vector<bool>> correctness(n);

  auto run_dialog = [&](size_t di) {
    const Dialog& d = dataset.dialogs[di];
    const Scene& scene = *by_id.at(d.scene_id);
    std::vector<QaPair> full;
    full.reserve(d.rounds.size());
    outcomes[di].reserve(d.rounds.size());
    correctness[di].reserve(d.rounds.size());
    for (int r = 1; r <= rounds; ++r) {
      const Round& round = d.rounds[r - 1];
      size_t visible = full.size();
      if (!config.window.all) {
        visible = std::min(visible, static_cast<size_t>(config.window.last_n));
      }
      std::vector<QaPair> history(full.end() - visible, full.end());
      std::string predicted;
      bool errored = false;
      try {
        predicted = model.answer(scene, d.caption, history, round.question,
                                 RoundContext{static_cast<int>(di), r});
      } catch (const std::exception&) {
        predicted = kErrorSentinel;
        errored = true;
      }
      bool ok = !errored &&
                normalize_answer(predicted) == normalize_answer(round.answer);
      RoundOutcome out;
      out.dialog_index = static_cast<int>(di);
      out.round = r;
      out.question_type = round.question_type;
      out.category = to_string(category_of(round.program));
      out.coref = round.coref.str();
      out.correct = ok;
      out.model_error = errored;
      outcomes[di].push_back(std::move(out));
      correctness[di].push_back(ok);
      std::string hist_answer = config.scheme == HistoryScheme::kGtHistory
                                    ? round.answer
                                    : predicted;
      full.push_back(QaPair{round.question, std::move(hist_answer)});
    }
  };

  int threads = config.threads > 0 ? config.threads : default_thread_count();
  threads = std::min<int>(threads, static_cast<int>(n));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) run_dialog(i);
  } else {
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (size_t i = static_cast<size_t>(t); i < n;
             i += static_cast<size_t>(threads)) {
          try {
            run_dialog(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  EvaluationReport rep;
  rep.n_dialogs = static_cast<int>(n);
  rep.rounds_per_dialog = rounds;
  rep.per_round.resize(rounds);
  rep.per_category = {{"count", {}}, {"exist", {}}, {"seek", {}}};
  for (const CorefBin& b : config.coref_bins) {
    rep.per_coref.emplace_back(b.name, SliceStats{});
  }
  for (size_t di = 0; di < n; ++di) {
    for (int r = 1; r <= rounds; ++r) {
      const RoundOutcome& o = outcomes[di][r - 1];
      ++rep.total_rounds;
      rep.total_correct += o.correct ? 1 : 0;
      rep.model_errors += o.model_error ? 1 : 0;
      auto bump = [&](SliceStats& s) {
        ++s.count;
        s.correct += o.correct ? 1 : 0;
      };
      bump(rep.per_round[r - 1]);
      bump(rep.per_category.at(o.category));
      size_t bi =
          bin_index(config.coref_bins, dataset.dialogs[di].rounds[r - 1].coref);
      bump(rep.per_coref[bi].second);
      rep.outcomes.push_back(o);
    }
  }
  rep.overall_accuracy =
      static_cast<double>(rep.total_correct) / rep.total_rounds;
  rep.nffr_value = nffr(correctness, rounds);
  rep.ffr_value = ffr(correctness, rounds);
  return rep;
}

json EvaluationReport::to_json() const {
  json slices = json::object();
  auto slice = [](const SliceStats& s) {
    return json{{"count", s.count},
                {"correct", s.correct},
                {"accuracy", s.accuracy()}};
  };
  json per_round_json = json::array();
  json per_round_acc = json::array();
  for (size_t i = 0; i < per_round.size(); ++i) {
    json row = slice(per_round[i]);
    row["round"] = i + 1;
    per_round_json.push_back(std::move(row));
    per_round_acc.push_back(per_round[i].accuracy());
  }
  json per_cat = json::object();
  for (const auto& [name, stats] : per_category) per_cat[name] = slice(stats);
  json per_bin = json::array();
  for (const auto& [name, stats] : per_coref) {
    json row = slice(stats);
    row["bin"] = name;
    per_bin.push_back(std::move(row));
  }
  return json{{"counts",
               {{"dialogs", n_dialogs},
                {"rounds_per_dialog", rounds_per_dialog},
                {"total_rounds", total_rounds},
                {"total_correct", total_correct},
                {"model_errors", model_errors}}},
              {"overall_accuracy", overall_accuracy},
              {"nffr", nffr_value},
              {"ffr", ffr_value},
              {"per_round_accuracy", std::move(per_round_acc)},
              {"per_round", std::move(per_round_json)},
              {"per_category", std::move(per_cat)},
              {"per_coref_bin", std::move(per_bin)}};
}

SweepReport sweep_history_window(const Dataset& dataset,
                                 const std::vector<Scene>& scenes,
                                 DialogModel& model,
                                 const std::vector<HistoryWindow>& windows,
                                 const EvaluationConfig& base_config) {
  if (windows.empty()) {
    throw EmptyInputError("window sweep needs at least one window");
  }
  SweepReport sweep;
  for (const HistoryWindow& w : windows) {
    for (HistoryScheme scheme :
         {HistoryScheme::kGtHistory, HistoryScheme::kPredHistory}) {
      EvaluationConfig cfg = base_config;
      cfg.window = w;
      cfg.scheme = scheme;
      sweep.cells.push_back(
          SweepCell{w, scheme, evaluate(dataset, scenes, model, cfg)});
    }
  }
  return sweep;
}

json SweepReport::to_json() const {
  json cells_json = json::array();
  json grid = json::array();
  for (const SweepCell& c : cells) {
    const char* scheme =
        c.scheme == HistoryScheme::kGtHistory ? "gt" : "pred";
    cells_json.push_back(json{{"window", c.window.str()},
                              {"scheme", scheme},
                              {"report", c.report.to_json()}});
    json bins = json::object();
    for (const auto& [name, stats] : c.report.per_coref) {
      bins[name] = stats.accuracy();
    }
    grid.push_back(json{{"window", c.window.str()},
                        {"scheme", scheme},
                        {"per_coref_bin_accuracy", std::move(bins)}});
  }
  return json{{"grid", std::move(grid)}, {"cells", std::move(cells_json)}};
}

json config_to_json(const EvaluationConfig& config) {
  json bins = json::array();
  for (const CorefBin& b : config.coref_bins) bins.push_back(b.name);
  return json{{"scheme",
               config.scheme == HistoryScheme::kGtHistory ? "gt" : "pred"},
              {"window", config.window.str()},
              {"coref_bins", std::move(bins)},
              {"threads", config.threads}};
}

namespace {

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_report(const EvaluationReport& report,
                  const EvaluationConfig& config, const ReportMeta& meta,
                  const std::string& path) {
  json meta_json{{"config", config_to_json(config)},
                 {"model", meta.model},
                 {"tool_version", kVersion},
                 {"timestamp", utc_timestamp()}};
  if (!meta.dataset_path.empty()) {
    meta_json["dataset"] = meta.dataset_path;
    meta_json["dataset_hash"] = hex64(fnv1a_file(meta.dataset_path));
  }
  if (!meta.scenes_path.empty()) {
    meta_json["scenes"] = meta.scenes_path;
    meta_json["scenes_hash"] = hex64(fnv1a_file(meta.scenes_path));
  }
  json doc{{"report", report.to_json()}, {"meta", std::move(meta_json)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_round_csv(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "dialog_id,round,question_type,category,coref,correct\n";
  for (const RoundOutcome& o : report.outcomes) {
    out << o.dialog_index << ',' << o.round << ',' << o.question_type << ','
        << o.category << ',' << o.coref << ',' << (o.correct ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  uint64_t hash = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  return hash;
}

std::string hex64(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace vds
