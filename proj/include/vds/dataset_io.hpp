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

#ifndef VDS_DATASET_IO_HPP_
#define VDS_DATASET_IO_HPP_

#include <string>
#include <vector>

#include "vds/dialog.hpp"
#include "vds/scene.hpp"

namespace vds {

// Serializes the dataset as versioned JSON. Programs are stored in their
// textual form; coref labels serialize as "none", "all", or a plain integer.
void write_dataset(const Dataset& dataset, const std::string& path);

// Loads a dataset, re-parsing and validating every stored program against the
// stored schema. Throws SchemaError on an unknown version or malformed
// document and ParseError/IoError on unreadable input.
Dataset read_dataset(const std::string& path);

// As above, but additionally replays a deterministic sample of the dialogs
// against their scenes and verifies the recorded answers reproduce. With the
// default fraction, every hundredth dialog is replayed; dialog 0 is always
// included. Throws MissingSceneError if a sampled dialog's scene is absent
// and ReplayMismatchError if a recorded answer does not reproduce.
Dataset read_dataset(const std::string& path, const std::vector<Scene>& scenes,
                     double replay_fraction = 0.01);

}  // namespace vds

#endif  // VDS_DATASET_IO_HPP_
