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

#ifndef VDS_ERROR_HPP_
#define VDS_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vds {

// Base class for everything thrown by the engine. code() is a stable,
// machine-readable name used by the CLI for error reporting.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define VDS_ERROR_CLASS(NAME, CODE, BASE)                 \
  class NAME : public BASE {                              \
   public:                                                \
    explicit NAME(const std::string& message)             \
        : BASE(CODE, message) {}                          \
                                                          \
   protected:                                             \
    NAME(std::string code, const std::string& message)    \
        : BASE(std::move(code), message) {}               \
  }

// Input-data and configuration failures.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, size_t byte_offset = 0)
      : Error("ParseError", message), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

VDS_ERROR_CLASS(SchemaError, "SchemaError", Error);
VDS_ERROR_CLASS(GenerationError, "GenerationError", Error);
VDS_ERROR_CLASS(IndexError, "IndexError", Error);
VDS_ERROR_CLASS(IoError, "IoError", Error);
VDS_ERROR_CLASS(EmptyInputError, "EmptyInput", Error);
VDS_ERROR_CLASS(MissingSceneError, "MissingScene", Error);
VDS_ERROR_CLASS(ModelError, "ModelError", Error);

// Program-text failures.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, size_t position)
      : Error("SyntaxError", message), position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

VDS_ERROR_CLASS(UnknownFunctionError, "UnknownFunction", Error);
VDS_ERROR_CLASS(ArgumentError, "ArgumentError", Error);

// Executor failures. ExecutionError is both the family base and the
// catch-all for knowledge-base state violations.
VDS_ERROR_CLASS(ExecutionError, "ExecutionError", Error);
VDS_ERROR_CLASS(ExecutionStateError, "ExecutionStateError", ExecutionError);
VDS_ERROR_CLASS(NoReferentError, "NoReferent", ExecutionError);
VDS_ERROR_CLASS(MissingSubjectError, "MissingSubject", ExecutionError);
VDS_ERROR_CLASS(NoActiveGroupError, "NoActiveGroup", ExecutionError);
VDS_ERROR_CLASS(FetchError, "FetchError", ExecutionError);
VDS_ERROR_CLASS(AmbiguousSimilarError, "AmbiguousSimilar", ExecutionError);
VDS_ERROR_CLASS(MaskViolationError, "MaskViolation", ExecutionError);
VDS_ERROR_CLASS(EmptyCandidatesError, "EmptyCandidates", ExecutionError);
VDS_ERROR_CLASS(ReplayMismatchError, "ReplayMismatch", ExecutionError);

#undef VDS_ERROR_CLASS

// Template lookup failure; carries the closest surface forms for diagnostics.
class NoTemplateMatchError : public Error {
 public:
  NoTemplateMatchError(const std::string& message,
                       std::vector<std::string> suggestions)
      : Error("NoTemplateMatch", message),
        suggestions_(std::move(suggestions)) {}
  const std::vector<std::string>& suggestions() const { return suggestions_; }

 private:
  std::vector<std::string> suggestions_;
};

}  // namespace vds

#endif  // VDS_ERROR_HPP_
