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

#ifndef VDS_DIALOG_GEN_HPP_
#define VDS_DIALOG_GEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vds/dialog.hpp"
#include "vds/executor.hpp"
#include "vds/templates.hpp"

namespace vds {

struct DialogGenConfig {
  int rounds = 10;
  // Question functions the generator may use; empty means all of them.
  std::vector<std::string> allowed_questions;
};

// Deterministic in (scene, config, seed): picks an executable caption, then
// per round samples a question uniformly among the functions whose
// preconditions currently hold (with uniformly sampled arguments), executes
// it, and records the answer and co-reference label. A balance guard keeps
// any single function from dominating a dialog.
Dialog generate_dialog(const Scene& scene, const AttributeSchema& schema,
                       const TemplateSet& templates,
                       const DialogGenConfig& config, uint64_t seed);

// Label for a question about to execute against kb's current state.
CorefLabel coref_label_of(const Program& p, const KnowledgeBase& kb);

// Re-executes a dialog's recorded programs from scratch; throws
// ReplayMismatchError (naming the dialog and round) when a recorded answer or
// the ambiguity flag does not reproduce. Returns the final KB state.
KnowledgeBase replay_dialog(const Dialog& dialog, const Scene& scene,
                            const AttributeSchema& schema,
                            int dialog_index = -1);

// Every valid argument instantiation of one function, in a fixed enumeration
// order (argument positions vary odometer-style, last position fastest;
// value lists come out in canonical dimension order).
std::vector<Program> enumerate_programs(const FunctionSignature& sig,
                                        const AttributeSchema& schema);

}  // namespace vds

#endif  // VDS_DIALOG_GEN_HPP_
