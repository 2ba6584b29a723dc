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

#include "vds/dialog_gen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "vds/error.hpp"
#include "vds/rng.hpp"

namespace vds {
namespace {

std::vector<std::string> all_values(const AttributeSchema& schema) {
  std::vector<std::string> out;
  for (size_t d = 0; d < schema.dimension_count(); ++d) {
    for (const std::string& v : schema.values(d)) out.push_back(v);
  }
  return out;
}

const std::array<const char*, 4> kPosTokens = {"right", "left", "front",
                                               "behind"};

// Nonempty dimension subsets in ascending bitmask order, each expanded to
// every value combination (earlier dimensions vary slower).
void enumerate_attr_lists(const AttributeSchema& schema,
                          std::vector<std::vector<std::string>>* out) {
  size_t dims = schema.dimension_count();
  for (size_t mask = 1; mask < (size_t{1} << dims); ++mask) {
    std::vector<size_t> chosen;
    for (size_t d = 0; d < dims; ++d) {
      if (mask & (size_t{1} << d)) chosen.push_back(d);
    }
    std::vector<size_t> idx(chosen.size(), 0);
    for (;;) {
      std::vector<std::string> combo;
      for (size_t i = 0; i < chosen.size(); ++i) {
        combo.push_back(schema.values(chosen[i])[idx[i]]);
      }
      out->push_back(std::move(combo));
      size_t k = chosen.size();
      while (k > 0) {
        --k;
        if (++idx[k] < schema.values(chosen[k]).size()) break;
        idx[k] = 0;
        if (k == 0) {
          k = SIZE_MAX;
          break;
        }
      }
      if (k == SIZE_MAX) break;
    }
  }
}

}  // namespace

std::vector<Program> enumerate_programs(const FunctionSignature& sig,
                                        const AttributeSchema& schema) {
  std::vector<Program> out;
  if (sig.has_attr_list()) {
    std::vector<std::vector<std::string>> lists;
    enumerate_attr_lists(schema, &lists);
    for (auto& list : lists) out.push_back(Program{sig.name, std::move(list)});
    return out;
  }
  std::vector<std::vector<std::string>> pools;
  for (ArgKind kind : sig.args) {
    switch (kind) {
      case ArgKind::kAttr:
        pools.push_back(all_values(schema));
        break;
      case ArgKind::kAttrType:
        pools.push_back(schema.dimensions());
        break;
      case ArgKind::kPos:
        pools.emplace_back(kPosTokens.begin(), kPosTokens.end());
        break;
      case ArgKind::kAttrList:
        break;  // unreachable: handled above
    }
  }
  if (pools.empty()) {
    out.push_back(Program{sig.name, {}});
    return out;
  }
  std::vector<size_t> idx(pools.size(), 0);
  for (;;) {
    Program p;
    p.name = sig.name;
    for (size_t i = 0; i < pools.size(); ++i) p.args.push_back(pools[i][idx[i]]);
    out.push_back(std::move(p));
    size_t k = pools.size();
    while (k > 0) {
      --k;
      if (++idx[k] < pools[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
  }
}

CorefLabel coref_label_of(const Program& p, const KnowledgeBase& kb) {
  const FunctionSignature& sig = Registry::instance().at(p.name);
  switch (sig.id) {
    case Fn::kCountAll:
    case Fn::kCountAttribute:
    case Fn::kExistAttribute:
      return CorefLabel::none();
    case Fn::kCountOther:
    case Fn::kExistOther:
    case Fn::kCountAllGroup:
    case Fn::kCountAttributeGroup:
    case Fn::kExistAttributeGroup:
      return CorefLabel::all();
    default:
      break;
  }
  // Entity-referent questions: distance from the referent's first mention.
  // Resolution does not change the KB, so the const_cast is sound.
  int referent = referent_of(const_cast<KnowledgeBase&>(kb), p);
  const SeenRecord* rec = kb.record(referent);
  if (rec == nullptr) {
    throw ExecutionStateError("referent has no knowledge-base record");
  }
  return CorefLabel::dist(kb.round() - rec->first_mention_round);
}

namespace {

// Cheap executability analysis for the current KB state. The generator never
// trial-executes: these pools mirror the executor's error conditions
// (missing subject/previous subject, no active group, unfetchable attribute,
// similar-candidate count != 1), which the replay property test cross-checks.
struct RoundPools {
  std::vector<std::vector<Program>> by_function;  // parallel to functions
  std::vector<const FunctionSignature*> functions;
};

class PoolBuilder {
 public:
  PoolBuilder(const KnowledgeBase& kb) : kb_(kb), schema_(kb.schema()) {
    has_subject_ = kb.subject().has_value();
    has_prev_ = kb.prev_subject().has_value();
    has_group_ = kb.group().has_value();
    for (const std::string& v : all_values(schema_)) {
      size_t dim = *schema_.value_dimension(v);
      int fetched = -1;
      for (const SeenRecord& r : kb.seen()) {
        auto it = r.known.find(dim);
        if (it != r.known.end() && it->second == v) {
          fetched = r.entity;
          break;
        }
      }
      if (fetched < 0) continue;
      fetchable_.push_back(v);
      int scene_matches = 0;
      for (const Entity& e : kb.scene().entities) {
        if (e.attribute(dim) == v) ++scene_matches;
      }
      // The fetched entity itself carries the value, so exactly one other
      // candidate exists iff the scene has exactly two.
      if (scene_matches == 2) similar_ok_.push_back(v);
    }
  }

  std::vector<Program> pool(const FunctionSignature& sig) const {
    std::vector<Program> out;
    auto add = [&](std::vector<std::string> args) {
      out.push_back(Program{sig.name, std::move(args)});
    };
    auto add_ref_programs = [&](const std::vector<std::string>& firsts,
                                bool with_pos_second) {
      // imm/imm2 forms: enumerate firsts (pos or attr_type), optionally a
      // second pos argument.
      for (const std::string& f : firsts) {
        if (!with_pos_second) {
          add({f});
          continue;
        }
        for (const char* pos : kPosTokens) add({f, pos});
      }
    };
    const std::vector<std::string> dims = schema_.dimensions();
    const std::vector<std::string> poss(kPosTokens.begin(), kPosTokens.end());

    switch (sig.id) {
      case Fn::kCountAll:
      case Fn::kCountOther:
      case Fn::kExistOther:
        add({});
        break;
      case Fn::kCountAllGroup:
        if (has_group_) add({});
        break;
      case Fn::kCountAttribute:
      case Fn::kExistAttribute:
        for (const std::string& v : all_values(schema_)) add({v});
        break;
      case Fn::kCountAttributeGroup:
      case Fn::kExistAttributeGroup:
        if (has_group_) {
          for (const std::string& v : all_values(schema_)) add({v});
        }
        break;
      case Fn::kCountObjRelImm:
      case Fn::kExistObjRelImm:
        if (has_subject_) add_ref_programs(poss, false);
        break;
      case Fn::kCountObjRelImm2:
      case Fn::kExistObjRelImm2:
        if (has_prev_) add_ref_programs(poss, false);
        break;
      case Fn::kCountObjRelEarly:
      case Fn::kExistObjRelEarly:
        for (const std::string& pos : poss) {
          for (const std::string& a : fetchable_) add({pos, a});
        }
        break;
      case Fn::kCountObjExcludeImm:
      case Fn::kExistObjExcludeImm:
        if (has_subject_) add_ref_programs(dims, false);
        break;
      case Fn::kCountObjExcludeEarly:
      case Fn::kExistObjExcludeEarly:
        for (const std::string& t : dims) {
          for (const std::string& a : fetchable_) add({t, a});
        }
        break;
      case Fn::kSeekAttrImm:
        if (has_subject_) add_ref_programs(dims, false);
        break;
      case Fn::kSeekAttrImm2:
        if (has_prev_) add_ref_programs(dims, false);
        break;
      case Fn::kSeekAttrEarly:
        for (const std::string& t : dims) {
          for (const std::string& a : fetchable_) add({t, a});
        }
        break;
      case Fn::kSeekAttrSimEarly:
        for (const std::string& t : dims) {
          for (const std::string& a : similar_ok_) add({t, a});
        }
        break;
      case Fn::kSeekAttrRelImm:
        if (has_subject_) add_ref_programs(dims, true);
        break;
      case Fn::kSeekAttrRelEarly:
        for (const std::string& t : dims) {
          for (const std::string& pos : poss) {
            for (const std::string& a : fetchable_) add({t, pos, a});
          }
        }
        break;
      default:
        break;  // caption functions have no question pool
    }
    return out;
  }

 private:
  const KnowledgeBase& kb_;
  const AttributeSchema& schema_;
  bool has_subject_ = false;
  bool has_prev_ = false;
  bool has_group_ = false;
  std::vector<std::string> fetchable_;
  std::vector<std::string> similar_ok_;
};

RoundPools build_round_pools(const KnowledgeBase& kb,
                             const std::set<std::string>& allowed,
                             const std::map<std::string, int>& counts,
                             int per_function_cap) {
  RoundPools pools;
  PoolBuilder builder(kb);
  for (const FunctionSignature& sig : Registry::instance().all()) {
    if (sig.kind != FunctionKind::kQuestion) continue;
    if (!allowed.empty() && !allowed.count(sig.name)) continue;
    auto it = counts.find(sig.name);
    if (it != counts.end() && it->second >= per_function_cap) continue;
    std::vector<Program> p = builder.pool(sig);
    if (p.empty()) continue;
    pools.functions.push_back(&sig);
    pools.by_function.push_back(std::move(p));
  }
  return pools;
}

// Caption instantiations that execute without error on this scene.
std::vector<std::vector<Program>> caption_pools(const Scene& scene,
                                                const AttributeSchema& schema) {
  std::vector<std::vector<Program>> pools;
  for (const FunctionSignature& sig : Registry::instance().all()) {
    if (sig.kind != FunctionKind::kCaption) continue;
    std::vector<Program> pool;
    for (Program& p : enumerate_programs(sig, schema)) {
      bool ok = false;
      if (sig.id == Fn::kObjRelation) {
        auto pos = parse_position(p.args[1]);
        std::vector<int> xs = filter_by_values(scene, schema, {p.args[0]});
        std::vector<int> ys = filter_by_values(scene, schema, {p.args[2]});
        for (int x : xs) {
          for (int y : ys) {
            if (x != y && relates(scene, x, y, *pos)) {
              ok = true;
              break;
            }
          }
          if (ok) break;
        }
      } else {
        ok = !filter_by_values(scene, schema, p.args).empty();
      }
      if (ok) pool.push_back(std::move(p));
    }
    if (!pool.empty()) pools.push_back(std::move(pool));
  }
  return pools;
}

int balance_cap(int rounds, size_t function_count) {
  if (function_count == 0) return 1;
  int cap = (3 * rounds) / static_cast<int>(function_count);
  return std::max(1, cap);
}

}  // namespace

Dialog generate_dialog(const Scene& scene, const AttributeSchema& schema,
                       const TemplateSet& templates,
                       const DialogGenConfig& config, uint64_t seed) {
  if (config.rounds < 1) {
    throw GenerationError("a dialog needs at least one round");
  }
  std::set<std::string> allowed(config.allowed_questions.begin(),
                                config.allowed_questions.end());
  size_t allowed_count = 0;
  for (const FunctionSignature& sig : Registry::instance().all()) {
    if (sig.kind != FunctionKind::kQuestion) continue;
    if (allowed.empty() || allowed.count(sig.name)) ++allowed_count;
  }
  if (allowed_count == 0) {
    throw GenerationError("the allowed-function set excludes every question");
  }

  Rng rng(seed);
  KnowledgeBase kb = init_kb(scene, schema);

  std::vector<std::vector<Program>> captions = caption_pools(scene, schema);
  if (captions.empty()) {
    throw GenerationError("scene " + std::to_string(scene.id) +
                          " admits no executable caption");
  }
  const std::vector<Program>& cap_pool = captions[rng.index(captions.size())];
  const Program& caption = cap_pool[rng.index(cap_pool.size())];
  CaptionResult cres = execute_caption(kb, caption);

  Dialog dialog;
  dialog.scene_id = scene.id;
  dialog.seed = seed;
  dialog.ambiguous_caption = cres.ambiguous;
  dialog.caption_program = caption;
  dialog.caption =
      templates.render(caption, rng.below(templates.variant_count(caption.name)));

  std::map<std::string, int> counts;
  int cap = balance_cap(config.rounds, allowed_count);
  for (int i = 1; i <= config.rounds; ++i) {
    kb.begin_round();
    RoundPools pools = build_round_pools(kb, allowed, counts, cap);
    if (pools.functions.empty()) {
      throw GenerationError("scene " + std::to_string(scene.id) + ", round " +
                            std::to_string(i) +
                            ": no executable question available");
    }
    size_t f = rng.index(pools.functions.size());
    const std::vector<Program>& pool = pools.by_function[f];
    const Program& q = pool[rng.index(pool.size())];

    Round round;
    round.program = q;
    round.question_type = q.name;
    round.coref = coref_label_of(q, kb);
    round.answer = execute_question(kb, q).str();
    round.question =
        templates.render(q, rng.below(templates.variant_count(q.name)));
    dialog.rounds.push_back(std::move(round));
    ++counts[q.name];
  }
  return dialog;
}

KnowledgeBase replay_dialog(const Dialog& dialog, const Scene& scene,
                            const AttributeSchema& schema, int dialog_index) {
  auto where = [&](int round) {
    std::string s = "dialog";
    if (dialog_index >= 0) s += " " + std::to_string(dialog_index);
    s += " (scene " + std::to_string(dialog.scene_id) + ")";
    if (round > 0) s += ", round " + std::to_string(round);
    return s;
  };
  KnowledgeBase kb = init_kb(scene, schema);
  try {
    CaptionResult cres = execute_caption(kb, dialog.caption_program);
    if (cres.ambiguous != dialog.ambiguous_caption) {
      throw ReplayMismatchError(where(0) +
                                ": recorded ambiguity flag does not reproduce");
    }
    for (size_t i = 0; i < dialog.rounds.size(); ++i) {
      const Round& r = dialog.rounds[i];
      if (r.question_type != r.program.name) {
        throw ReplayMismatchError(where(static_cast<int>(i) + 1) +
                                  ": question_type does not match the program");
      }
      kb.begin_round();
      std::string got = execute_question(kb, r.program).str();
      if (got != r.answer) {
        throw ReplayMismatchError(where(static_cast<int>(i) + 1) +
                                  ": recorded answer '" + r.answer +
                                  "' replays as '" + got + "'");
      }
    }
  } catch (const ReplayMismatchError&) {
    throw;
  } catch (const ExecutionError& e) {
    throw ReplayMismatchError(where(static_cast<int>(kb.round())) +
                              ": recorded program fails to execute: " +
                              e.what());
  }
  return kb;
}

}  // namespace vds
