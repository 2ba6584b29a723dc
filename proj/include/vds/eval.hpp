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

#ifndef VDS_EVAL_HPP_
#define VDS_EVAL_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "vds/dialog.hpp"
#include "vds/scene.hpp"
#include "vds/templates.hpp"

namespace vds {

// One visible history round as handed to a model.
struct QaPair {
  std::string question;
  std::string answer;
};

// Where the harness currently is. Models that look up canned answers need
// this; models answering from the scene and history can ignore it.
struct RoundContext {
  int dialog_index = 0;  // 0-based position in the dataset
  int round_index = 1;   // 1-based round within the dialog
};

// A dialog-answering model. The harness owns all history bookkeeping; a model
// must answer from exactly the arguments it is given and keep no state
// between calls (caches are fine, dialog state is not).
class DialogModel {
 public:
  virtual ~DialogModel() = default;
  virtual std::string answer(const Scene& scene, const std::string& caption,
                             const std::vector<QaPair>& history,
                             const std::string& question,
                             const RoundContext& ctx) = 0;
  virtual std::string name() const = 0;
};

// The built-in engine-backed model. Per call it parses the caption and every
// visible history question back to programs, executes them in order to
// rebuild a knowledge base (history answer strings are ignored; history
// rounds that fail to parse or execute are skipped), then executes the
// current question. Thread-safe; parses are memoized.
class SymbolicModel : public DialogModel {
 public:
  explicit SymbolicModel(const TemplateSet& templates);
  std::string answer(const Scene& scene, const std::string& caption,
                     const std::vector<QaPair>& history,
                     const std::string& question,
                     const RoundContext& ctx) override;
  std::string name() const override { return "symbolic"; }

 private:
  const Program& parse_cached(const std::string& text, bool caption);

  const TemplateSet& templates_;
  std::shared_mutex mutex_;
  std::unordered_map<std::string, Program> cache_;
};

// Answers every question with the dataset's recorded ground truth.
class OracleModel : public DialogModel {
 public:
  explicit OracleModel(const Dataset& dataset) : dataset_(dataset) {}
  std::string answer(const Scene& scene, const std::string& caption,
                     const std::vector<QaPair>& history,
                     const std::string& question,
                     const RoundContext& ctx) override;
  std::string name() const override { return "oracle"; }

 private:
  const Dataset& dataset_;
};

// Replays a canned answer table; rounds beyond the table raise ModelError.
// The JSON form is {"answers": [["a1", "a2", ...], ...]}, one inner list per
// dialog.
class TableModel : public DialogModel {
 public:
  explicit TableModel(std::vector<std::vector<std::string>> answers)
      : answers_(std::move(answers)) {}
  static TableModel load(const std::string& path);
  std::string answer(const Scene& scene, const std::string& caption,
                     const std::vector<QaPair>& history,
                     const std::string& question,
                     const RoundContext& ctx) override;
  std::string name() const override { return "stub"; }

 private:
  std::vector<std::vector<std::string>> answers_;
};

enum class HistoryScheme { kGtHistory, kPredHistory };

// All rounds, or only the last N (N = 0 means the caption alone).
struct HistoryWindow {
  bool all = true;
  int last_n = 0;
  static HistoryWindow everything() { return HistoryWindow{true, 0}; }
  static HistoryWindow last(int n) { return HistoryWindow{false, n}; }
  bool operator==(const HistoryWindow& o) const {
    return all == o.all && (all || last_n == o.last_n);
  }
  std::string str() const { return all ? "all" : std::to_string(last_n); }
};

// One bin of coreference-distance labels.
struct CorefBin {
  enum class Kind { kNone, kAll, kRange };
  std::string name;
  Kind kind = Kind::kRange;
  int min = 1;  // inclusive, kRange only
  int max = 1;  // inclusive; INT_MAX-like sentinel for open-ended bins
  bool contains(const CorefLabel& label) const;
};

// none, 1, 2, 3, 4+, all.
std::vector<CorefBin> default_coref_bins();

struct EvaluationConfig {
  HistoryScheme scheme = HistoryScheme::kGtHistory;
  HistoryWindow window = HistoryWindow::everything();
  std::vector<CorefBin> coref_bins = default_coref_bins();
  int threads = 0;  // 0 = default_thread_count()
};

struct SliceStats {
  int64_t count = 0;
  int64_t correct = 0;
  double accuracy() const {
    return count == 0 ? 0.0 : static_cast<double>(correct) / count;
  }
};

// Flat per-round outcome, the substance behind every aggregate and the CSV.
struct RoundOutcome {
  int dialog_index = 0;
  int round = 0;  // 1-based
  std::string question_type;
  std::string category;  // count | exist | seek
  std::string coref;     // none | all | digits
  bool correct = false;
  bool model_error = false;
};

struct EvaluationReport {
  int n_dialogs = 0;
  int rounds_per_dialog = 0;
  int64_t total_rounds = 0;
  int64_t total_correct = 0;
  double overall_accuracy = 0.0;
  double nffr_value = 0.0;
  double ffr_value = 0.0;
  int64_t model_errors = 0;
  std::vector<SliceStats> per_round;                          // index = round-1
  std::map<std::string, SliceStats> per_category;             // count/exist/seek
  std::vector<std::pair<std::string, SliceStats>> per_coref;  // bin order
  std::vector<RoundOutcome> outcomes;                         // row-major

  // Deterministic report body: aggregates only, no metadata, no timestamps.
  nlohmann::json to_json() const;
};

// Checks that the bins cover "none", "all", and every distance 1.. exactly
// once; throws ArgumentError otherwise.
void validate_coref_bins(const std::vector<CorefBin>& bins);

// Lowercase and trim; this is the equality under which answers are scored.
std::string normalize_answer(std::string_view text);

// Runs the model over every dialog. History handed to the model is the
// caption plus the last min(window, i-1) rounds; under the predicted-history
// scheme the history answers are the model's own earlier outputs for that
// dialog. A throwing model scores the round incorrect and increments the
// error tally. Dialogs are independent and may run on several threads; the
// result does not depend on the thread count.
EvaluationReport evaluate(const Dataset& dataset,
                          const std::vector<Scene>& scenes, DialogModel& model,
                          const EvaluationConfig& config);

struct SweepCell {
  HistoryWindow window;
  HistoryScheme scheme;
  EvaluationReport report;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  nlohmann::json to_json() const;
};

// Evaluates every (window, scheme) pair over both schemes and collects the
// per-bin accuracy grid.
SweepReport sweep_history_window(const Dataset& dataset,
                                 const std::vector<Scene>& scenes,
                                 DialogModel& model,
                                 const std::vector<HistoryWindow>& windows,
                                 const EvaluationConfig& base_config);

struct ReportMeta {
  std::string dataset_path;
  std::string scenes_path;
  std::string model;
};

nlohmann::json config_to_json(const EvaluationConfig& config);

// {"report": <body>, "meta": {config, paths, dataset hash, timestamp}}.
void write_report(const EvaluationReport& report,
                  const EvaluationConfig& config, const ReportMeta& meta,
                  const std::string& path);

// One row per round: dialog_id, round, question_type, category, coref,
// correct.
void write_round_csv(const EvaluationReport& report, const std::string& path);

// FNV-1a over a file's bytes; used for input hashes in reports and manifests.
uint64_t fnv1a_file(const std::string& path);
std::string hex64(uint64_t value);

// VDS_THREADS when set (clamped to >= 1), otherwise the hardware thread
// count.
int default_thread_count();

}  // namespace vds

#endif  // VDS_EVAL_HPP_
