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

#include <climits>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vds/dialog_gen.hpp"
#include "vds/error.hpp"
#include "vds/eval.hpp"
#include "vds/executor.hpp"
#include "vds/scene_gen.hpp"

using namespace vds;

namespace {

const AttributeSchema& schema() { return AttributeSchema::default_schema(); }

const TemplateSet& templates() {
  static TemplateSet t = TemplateSet::builtin(schema());
  return t;
}

struct Corpus {
  std::vector<Scene> scenes;
  Dataset dataset{schema(), {}};
};

// A small generated corpus shared by the aggregate tests.
const Corpus& corpus() {
  static Corpus c = [] {
    Corpus out;
    out.dataset.schema = schema();
    DialogGenConfig cfg;
    cfg.rounds = 10;
    for (uint64_t s = 0; s < 8; ++s) {
      SceneGenConfig sc;
      sc.n_objects = 4 + static_cast<int>(s % 5);
      out.scenes.push_back(
          generate_scene(schema(), sc, 400 + s, static_cast<int>(s)));
      out.dataset.dialogs.push_back(generate_dialog(
          out.scenes.back(), schema(), templates(), cfg, 7100 + s));
    }
    return out;
  }();
  return c;
}

std::vector<std::vector<std::string>> oracle_answers(const Dataset& ds) {
  std::vector<std::vector<std::string>> out;
  for (const Dialog& d : ds.dialogs) {
    std::vector<std::string> row;
    for (const Round& r : d.rounds) row.push_back(r.answer);
    out.push_back(std::move(row));
  }
  return out;
}

// Echoes the most recent history answer (a fixed token on round 1). Under
// ground-truth history this tracks the dataset; under predicted history it
// tracks its own round-1 output. Also records the questions it was shown.
class EchoModel : public DialogModel {
 public:
  std::string answer(const Scene&, const std::string&,
                     const std::vector<QaPair>& history, const std::string&,
                     const RoundContext&) override {
    for (const QaPair& qa : history) seen_questions.push_back(qa.question);
    return history.empty() ? "alpha" : history.back().answer;
  }
  std::string name() const override { return "echo"; }
  std::vector<std::string> seen_questions;
};

class ThrowingModel : public DialogModel {
 public:
  std::string answer(const Scene&, const std::string&,
                     const std::vector<QaPair>&, const std::string&,
                     const RoundContext&) override {
    throw ModelError("deliberately broken");
  }
  std::string name() const override { return "broken"; }
};

Round make_round(const std::string& program_text, const std::string& answer,
                 CorefLabel coref) {
  Round r;
  r.program = parse_program(program_text);
  r.question_type = r.program.name;
  r.question = templates().render(r.program, 0);
  r.answer = answer;
  r.coref = coref;
  return r;
}

// Scene and three-round dialog with a round-3 reference to an attribute
// revealed in round 1, for history-window tests.
Corpus distance_two_corpus() {
  Corpus c;
  Scene scene = vds::testing::make_scene(
      {{"small", "red", "rubber", "cube", 0.0, 0.0},
       {"large", "blue", "metal", "sphere", 2.0, 0.0},
       {"small", "green", "rubber", "cylinder", 4.0, 0.0}});
  scene.id = 77;
  Dialog d;
  d.scene_id = 77;
  d.caption_program = parse_program("unique-obj(blue)");
  d.caption = templates().render(d.caption_program, 0);
  d.ambiguous_caption = false;
  d.rounds.push_back(
      make_round("seek-attr-rel-imm(colour, left)", "red", CorefLabel::dist(1)));
  d.rounds.push_back(make_round("count-all", "3", CorefLabel::none()));
  d.rounds.push_back(
      make_round("seek-attr-early(size, red)", "small", CorefLabel::dist(2)));
  c.scenes.push_back(std::move(scene));
  c.dataset.schema = schema();
  c.dataset.dialogs.push_back(std::move(d));
  return c;
}

}  // namespace

TEST_CASE("answers are compared lowercased and trimmed") {
  CHECK(normalize_answer("  Yes ") == "yes");
  CHECK(normalize_answer("RED") == "red");
  CHECK(normalize_answer("3") == "3");
  CHECK(normalize_answer("None") == "none");
  CHECK(normalize_answer("") == "");
  CHECK(normalize_answer(" \t\n ") == "");
  CHECK(normalize_answer("metal\n") == "metal");
}

TEST_CASE("the engine-backed model reproduces its own datasets perfectly") {
  const Corpus& c = corpus();
  SymbolicModel model(templates());
  for (HistoryScheme scheme :
       {HistoryScheme::kGtHistory, HistoryScheme::kPredHistory}) {
    EvaluationConfig cfg;
    cfg.scheme = scheme;
    cfg.threads = 2;
    EvaluationReport rep = evaluate(c.dataset, c.scenes, model, cfg);
    CHECK(rep.total_correct == rep.total_rounds);
    CHECK(rep.overall_accuracy == 1.0);
    CHECK(rep.nffr_value == 1.0);
    CHECK(rep.ffr_value == doctest::Approx(11.0));
    CHECK(rep.model_errors == 0);
  }
}

TEST_CASE("a perfect model makes the two history schemes indistinguishable") {
  const Corpus& c = corpus();
  SymbolicModel model(templates());
  EvaluationConfig cfg;
  cfg.threads = 1;
  cfg.scheme = HistoryScheme::kGtHistory;
  EvaluationReport gt = evaluate(c.dataset, c.scenes, model, cfg);
  cfg.scheme = HistoryScheme::kPredHistory;
  EvaluationReport pred = evaluate(c.dataset, c.scenes, model, cfg);
  CHECK(gt.to_json().dump() == pred.to_json().dump());
}

TEST_CASE("the oracle model scores perfectly by construction") {
  const Corpus& c = corpus();
  OracleModel model(c.dataset);
  EvaluationReport rep =
      evaluate(c.dataset, c.scenes, model, EvaluationConfig{});
  CHECK(rep.overall_accuracy == 1.0);
  CHECK(rep.nffr_value == 1.0);
  for (const SliceStats& s : rep.per_round) {
    CHECK(s.correct == s.count);
  }
}

TEST_CASE("a single wrong round shows up in per-round stats and nffr") {
  Corpus c;
  c.scenes = corpus().scenes;
  c.dataset.schema = schema();
  c.dataset.dialogs.push_back(corpus().dataset.dialogs[0]);

  auto answers = oracle_answers(c.dataset);
  answers[0][2] = "surely-wrong";
  TableModel model(std::move(answers));
  EvaluationReport rep =
      evaluate(c.dataset, c.scenes, model, EvaluationConfig{});

  CHECK(rep.n_dialogs == 1);
  CHECK(rep.rounds_per_dialog == 10);
  CHECK(rep.total_rounds == 10);
  CHECK(rep.total_correct == 9);
  CHECK(rep.model_errors == 0);
  for (int r = 0; r < 10; ++r) {
    CHECK(rep.per_round[r].count == 1);
    CHECK(rep.per_round[r].correct == (r == 2 ? 0 : 1));
  }
  CHECK(rep.nffr_value == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
  CHECK(rep.ffr_value == doctest::Approx(3.0).epsilon(1e-12));
  const RoundOutcome& o = rep.outcomes[2];
  CHECK(o.dialog_index == 0);
  CHECK(o.round == 3);
  CHECK_FALSE(o.correct);
  CHECK_FALSE(o.model_error);
}

TEST_CASE("predicted-history scheme feeds the model its own answers") {
  Corpus c;
  Scene scene = vds::testing::make_scene(
      {{"small", "red", "rubber", "cube", 0.0, 0.0},
       {"large", "blue", "metal", "sphere", 2.0, 0.0},
       {"small", "green", "rubber", "cylinder", 4.0, 0.0}});
  scene.id = 5;
  Dialog d;
  d.scene_id = 5;
  d.caption_program = parse_program("unique-obj(blue)");
  d.caption = templates().render(d.caption_program, 0);
  d.rounds.push_back(make_round("count-all", "3", CorefLabel::none()));
  d.rounds.push_back(make_round("count-all", "3", CorefLabel::none()));
  c.scenes.push_back(scene);
  c.dataset.schema = schema();
  c.dataset.dialogs.push_back(d);

  EchoModel gt_model;
  EvaluationConfig cfg;
  cfg.scheme = HistoryScheme::kGtHistory;
  EvaluationReport gt = evaluate(c.dataset, c.scenes, gt_model, cfg);
  // Round 1 "alpha" is wrong; round 2 echoes the ground-truth "3".
  CHECK(gt.total_correct == 1);
  CHECK_FALSE(gt.outcomes[0].correct);
  CHECK(gt.outcomes[1].correct);

  EchoModel pred_model;
  cfg.scheme = HistoryScheme::kPredHistory;
  EvaluationReport pred = evaluate(c.dataset, c.scenes, pred_model, cfg);
  // Round 2 now echoes its own wrong round-1 answer.
  CHECK(pred.total_correct == 0);

  // History questions are the recorded ones under both schemes.
  for (const std::string& q : gt_model.seen_questions) {
    CHECK(q == d.rounds[0].question);
  }
  CHECK(gt_model.seen_questions == pred_model.seen_questions);
}

TEST_CASE("the history window gates access to early references") {
  Corpus c = distance_two_corpus();
  SymbolicModel model(templates());

  EvaluationConfig cfg;
  cfg.window = HistoryWindow::everything();
  EvaluationReport full = evaluate(c.dataset, c.scenes, model, cfg);
  CHECK(full.overall_accuracy == 1.0);
  CHECK(full.model_errors == 0);

  cfg.window = HistoryWindow::last(2);
  EvaluationReport two = evaluate(c.dataset, c.scenes, model, cfg);
  CHECK(two.overall_accuracy == 1.0);

  // With one visible round, round 3 no longer sees round 1, where "red" was
  // established: the fetch fails and the round scores as a model error.
  cfg.window = HistoryWindow::last(1);
  EvaluationReport one = evaluate(c.dataset, c.scenes, model, cfg);
  CHECK(one.total_correct == 2);
  CHECK(one.per_round[2].correct == 0);
  CHECK(one.model_errors == 1);
  CHECK_FALSE(one.outcomes[2].correct);
  CHECK(one.outcomes[2].model_error);
}

TEST_CASE("report aggregates reconstruct from the flat outcomes") {
  const Corpus& c = corpus();
  auto answers = oracle_answers(c.dataset);
  // Corrupt a deterministic scattering of cells.
  for (size_t d = 0; d < answers.size(); ++d) {
    for (size_t r = d % 3; r < answers[d].size(); r += 3) {
      answers[d][r] = "wrong";
    }
  }
  TableModel model(std::move(answers));
  EvaluationConfig cfg;
  EvaluationReport rep = evaluate(c.dataset, c.scenes, model, cfg);

  CHECK(rep.outcomes.size() == static_cast<size_t>(rep.total_rounds));
  CHECK(rep.total_rounds == rep.n_dialogs * rep.rounds_per_dialog);
  CHECK(rep.overall_accuracy ==
        doctest::Approx(static_cast<double>(rep.total_correct) /
                        rep.total_rounds));

  int64_t round_count = 0, round_correct = 0;
  for (const SliceStats& s : rep.per_round) {
    round_count += s.count;
    round_correct += s.correct;
  }
  CHECK(round_count == rep.total_rounds);
  CHECK(round_correct == rep.total_correct);

  int64_t cat_count = 0, cat_correct = 0;
  for (const auto& [name, s] : rep.per_category) {
    cat_count += s.count;
    cat_correct += s.correct;
  }
  CHECK(cat_count == rep.total_rounds);
  CHECK(cat_correct == rep.total_correct);

  int64_t bin_count = 0, bin_correct = 0;
  for (const auto& [name, s] : rep.per_coref) {
    bin_count += s.count;
    bin_correct += s.correct;
  }
  CHECK(bin_count == rep.total_rounds);
  CHECK(bin_correct == rep.total_correct);

  // The bins appear in configuration order.
  REQUIRE(rep.per_coref.size() == 6);
  CHECK(rep.per_coref[0].first == "none");
  CHECK(rep.per_coref[4].first == "4+");
  CHECK(rep.per_coref[5].first == "all");

  // Every aggregate rebuilds from the outcome rows.
  std::vector<SliceStats> by_round(rep.rounds_per_dialog);
  for (const RoundOutcome& o : rep.outcomes) {
    ++by_round[o.round - 1].count;
    by_round[o.round - 1].correct += o.correct ? 1 : 0;
  }
  for (int r = 0; r < rep.rounds_per_dialog; ++r) {
    CHECK(by_round[r].count == rep.per_round[r].count);
    CHECK(by_round[r].correct == rep.per_round[r].correct);
  }
}

TEST_CASE("a throwing model is scored wrong everywhere, never crashes") {
  const Corpus& c = corpus();
  ThrowingModel model;
  EvaluationReport rep =
      evaluate(c.dataset, c.scenes, model, EvaluationConfig{});
  CHECK(rep.total_correct == 0);
  CHECK(rep.model_errors == rep.total_rounds);
  CHECK(rep.nffr_value == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  for (const RoundOutcome& o : rep.outcomes) {
    CHECK(o.model_error);
  }
}

TEST_CASE("thread count does not change the result") {
  const Corpus& c = corpus();
  auto answers = oracle_answers(c.dataset);
  for (size_t d = 0; d < answers.size(); d += 2) answers[d][4] = "off";
  TableModel model(std::move(answers));

  EvaluationConfig cfg;
  cfg.threads = 1;
  EvaluationReport serial = evaluate(c.dataset, c.scenes, model, cfg);
  cfg.threads = 5;
  EvaluationReport parallel = evaluate(c.dataset, c.scenes, model, cfg);
  CHECK(serial.to_json().dump() == parallel.to_json().dump());
  REQUIRE(serial.outcomes.size() == parallel.outcomes.size());
  for (size_t i = 0; i < serial.outcomes.size(); ++i) {
    CHECK(serial.outcomes[i].correct == parallel.outcomes[i].correct);
    CHECK(serial.outcomes[i].dialog_index == parallel.outcomes[i].dialog_index);
  }
}

TEST_CASE("coref bin validation accepts tilings and rejects everything else") {
  CHECK_NOTHROW(validate_coref_bins(default_coref_bins()));

  std::vector<CorefBin> custom = {
      {"none", CorefBin::Kind::kNone, 0, 0},
      {"1-2", CorefBin::Kind::kRange, 1, 2},
      {"3+", CorefBin::Kind::kRange, 3, INT_MAX},
      {"all", CorefBin::Kind::kAll, 0, 0},
  };
  CHECK_NOTHROW(validate_coref_bins(custom));

  CHECK_THROWS_AS(validate_coref_bins({}), ArgumentError);

  auto bins = default_coref_bins();
  bins.push_back({"all2", CorefBin::Kind::kAll, 0, 0});
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins.erase(bins.begin());  // no "none" bin
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins[1].name = "2";  // duplicate name
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins.erase(bins.begin() + 2);  // gap: 1, then 3, 4+
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins[2].min = 2;
  bins[2].max = 3;  // overlap with the "3" bin
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins[4].max = 9;  // last range no longer open-ended
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  bins = default_coref_bins();
  bins[1].min = 0;  // ranges start at 1
  CHECK_THROWS_AS(validate_coref_bins(bins), ArgumentError);

  // Custom bins flow through evaluation in order.
  const Corpus& c = corpus();
  OracleModel model(c.dataset);
  EvaluationConfig cfg;
  cfg.coref_bins = custom;
  EvaluationReport rep = evaluate(c.dataset, c.scenes, model, cfg);
  REQUIRE(rep.per_coref.size() == 4);
  CHECK(rep.per_coref[1].first == "1-2");
}

TEST_CASE("evaluation input validation") {
  const Corpus& c = corpus();
  SymbolicModel model(templates());

  Dataset empty{schema(), {}};
  CHECK_THROWS_AS(evaluate(empty, c.scenes, model, EvaluationConfig{}),
                  EmptyInputError);

  Dataset ragged = c.dataset;
  ragged.dialogs[1].rounds.pop_back();
  CHECK_THROWS_AS(evaluate(ragged, c.scenes, model, EvaluationConfig{}),
                  ArgumentError);

  Dataset orphan = c.dataset;
  orphan.dialogs[0].scene_id = 424242;
  CHECK_THROWS_AS(evaluate(orphan, c.scenes, model, EvaluationConfig{}),
                  MissingSceneError);

  EvaluationConfig bad;
  bad.window = HistoryWindow::last(-1);
  CHECK_THROWS_AS(evaluate(c.dataset, c.scenes, model, bad), ArgumentError);
}

TEST_CASE("round CSV lists one row per outcome") {
  Corpus c = distance_two_corpus();
  SymbolicModel model(templates());
  EvaluationReport rep =
      evaluate(c.dataset, c.scenes, model, EvaluationConfig{});
  const std::string path = "tmp_rounds.csv";
  write_round_csv(rep, path);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "dialog_id,round,question_type,category,coref,correct");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "0,1,seek-attr-rel-imm,seek,1,1");
  CHECK(rows[1] == "0,2,count-all,count,none,1");
  CHECK(rows[2] == "0,3,seek-attr-early,seek,2,1");
  std::remove(path.c_str());
}

TEST_CASE("written reports carry the body plus reproducibility metadata") {
  Corpus c = distance_two_corpus();
  SymbolicModel model(templates());
  EvaluationConfig cfg;
  EvaluationReport rep = evaluate(c.dataset, c.scenes, model, cfg);

  const std::string path = "tmp_report.json";
  ReportMeta meta;
  meta.model = model.name();
  write_report(rep, cfg, meta, path);

  std::ifstream in(path);
  nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc.contains("report"));
  CHECK(doc.contains("meta"));
  CHECK(doc["report"] == rep.to_json());
  CHECK(doc["meta"]["model"] == "symbolic");
  CHECK(doc["meta"]["config"]["scheme"] == "gt");
  CHECK(doc["meta"]["config"]["window"] == "all");
  CHECK(doc["meta"].contains("timestamp"));
  std::remove(path.c_str());
}

TEST_CASE("the window sweep covers every window under both schemes") {
  Corpus c = distance_two_corpus();
  SymbolicModel model(templates());
  std::vector<HistoryWindow> windows = {HistoryWindow::last(1),
                                        HistoryWindow::everything()};
  SweepReport sweep =
      sweep_history_window(c.dataset, c.scenes, model, windows,
                           EvaluationConfig{});
  REQUIRE(sweep.cells.size() == 4);
  CHECK(sweep.cells[0].window == HistoryWindow::last(1));
  CHECK(sweep.cells[0].scheme == HistoryScheme::kGtHistory);
  CHECK(sweep.cells[1].scheme == HistoryScheme::kPredHistory);
  CHECK(sweep.cells[2].window == HistoryWindow::everything());
  CHECK(sweep.cells[2].report.overall_accuracy == 1.0);
  CHECK(sweep.cells[0].report.overall_accuracy <
        sweep.cells[2].report.overall_accuracy);

  nlohmann::json j = sweep.to_json();
  REQUIRE(j.contains("grid"));
  REQUIRE(j.contains("cells"));
  CHECK(j["grid"].size() == 4);
  CHECK(j["cells"][0]["window"] == "1");
  CHECK(j["cells"][0]["scheme"] == "gt");

  CHECK_THROWS_AS(
      sweep_history_window(c.dataset, c.scenes, model, {}, EvaluationConfig{}),
      EmptyInputError);
}

TEST_CASE("canned models validate their inputs") {
  const std::string path = "tmp_answers.json";
  {
    std::ofstream out(path);
    out << R"({"answers": [["3", "yes"], ["no"]]})";
  }
  TableModel model = TableModel::load(path);
  RoundContext ctx{1, 1};
  Scene dummy;
  CHECK(model.answer(dummy, "", {}, "", ctx) == "no");
  ctx.round_index = 2;  // beyond dialog 1's single entry
  CHECK_THROWS_AS(model.answer(dummy, "", {}, "", ctx), ModelError);

  {
    std::ofstream out(path);
    out << R"({"answers": "nope"})";
  }
  CHECK_THROWS_AS(TableModel::load(path), SchemaError);
  {
    std::ofstream out(path);
    out << R"({"answers": [[3]]})";
  }
  CHECK_THROWS_AS(TableModel::load(path), SchemaError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(TableModel::load(path), IoError);

  const Corpus& c = corpus();
  OracleModel oracle(c.dataset);
  CHECK_THROWS_AS(
      oracle.answer(dummy, "", {}, "", RoundContext{999, 1}), IndexError);
  CHECK_THROWS_AS(
      oracle.answer(dummy, "", {}, "", RoundContext{0, 99}), IndexError);
}
