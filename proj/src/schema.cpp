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

#include "vds/schema.hpp"

#include "vds/error.hpp"

namespace vds {
namespace {

bool is_lower_token(std::string_view s) {
  if (s.empty()) return false;
  if (s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
              c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

AttributeSchema::AttributeSchema(std::vector<std::string> dimensions,
                                 std::vector<std::vector<std::string>> values)
    : dims_(std::move(dimensions)), values_(std::move(values)) {
  if (dims_.empty()) throw SchemaError("schema has no dimensions");
  if (values_.size() != dims_.size()) {
    throw SchemaError("schema needs one value list per dimension");
  }
  for (size_t d = 0; d < dims_.size(); ++d) {
    if (!is_lower_token(dims_[d])) {
      throw SchemaError("invalid dimension name '" + dims_[d] + "'");
    }
    if (!dim_index_.emplace(dims_[d], d).second) {
      throw SchemaError("duplicate dimension '" + dims_[d] + "'");
    }
    if (values_[d].empty()) {
      throw SchemaError("dimension '" + dims_[d] + "' has no values");
    }
  }
  for (size_t d = 0; d < dims_.size(); ++d) {
    for (const std::string& v : values_[d]) {
      if (!is_lower_token(v)) {
        throw SchemaError("invalid value name '" + v + "'");
      }
      if (dim_index_.count(v)) {
        throw SchemaError("value '" + v + "' collides with a dimension name");
      }
      if (!value_dim_.emplace(v, d).second) {
        throw SchemaError("value '" + v + "' appears in more than one place");
      }
    }
  }
}

const AttributeSchema& AttributeSchema::default_schema() {
  static const AttributeSchema schema(
      {"size", "colour", "material", "shape"},
      {{"large", "small"},
       {"blue", "brown", "cyan", "grey", "green", "purple", "red", "yellow"},
       {"rubber", "metal"},
       {"cube", "cylinder", "sphere"}});
  return schema;
}

std::optional<size_t> AttributeSchema::dimension_index(
    std::string_view name) const {
  auto it = dim_index_.find(name);
  if (it == dim_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<size_t> AttributeSchema::value_dimension(
    std::string_view value) const {
  auto it = value_dim_.find(value);
  if (it == value_dim_.end()) return std::nullopt;
  return it->second;
}

size_t AttributeSchema::require_dimension(std::string_view name) const {
  auto i = dimension_index(name);
  if (!i) {
    throw ArgumentError("'" + std::string(name) + "' is not a dimension name");
  }
  return *i;
}

size_t AttributeSchema::value_count() const {
  size_t n = 0;
  for (const auto& vs : values_) n += vs.size();
  return n;
}

nlohmann::json AttributeSchema::to_json() const {
  return nlohmann::json{{"dimensions", dims_}, {"values", values_}};
}

AttributeSchema AttributeSchema::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dimensions") || !j.contains("values")) {
    throw SchemaError("schema JSON needs 'dimensions' and 'values'");
  }
  try {
    return AttributeSchema(j.at("dimensions").get<std::vector<std::string>>(),
                           j.at("values")
                               .get<std::vector<std::vector<std::string>>>());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed schema JSON: ") + e.what());
  }
}

}  // namespace vds
