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

#ifndef VDS_SCHEMA_HPP_
#define VDS_SCHEMA_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vds {

// The attribute vocabulary entities are described with: an ordered list of
// dimensions (e.g. size, colour, material, shape), each with an ordered list
// of values. Every value belongs to exactly one dimension, so a bare value
// token identifies its dimension. The schema is data so that non-default
// domains can be configured without code changes.
class AttributeSchema {
 public:
  AttributeSchema(std::vector<std::string> dimensions,
                  std::vector<std::vector<std::string>> values);

  // The default domain: size {large, small}, colour {blue, brown, cyan,
  // grey, green, purple, red, yellow}, material {rubber, metal},
  // shape {cube, cylinder, sphere}.
  static const AttributeSchema& default_schema();

  size_t dimension_count() const { return dims_.size(); }
  const std::vector<std::string>& dimensions() const { return dims_; }
  const std::string& dimension(size_t i) const { return dims_.at(i); }
  const std::vector<std::string>& values(size_t dim) const {
    return values_.at(dim);
  }

  std::optional<size_t> dimension_index(std::string_view name) const;
  std::optional<size_t> value_dimension(std::string_view value) const;
  bool has_dimension(std::string_view name) const {
    return dimension_index(name).has_value();
  }
  bool has_value(std::string_view value) const {
    return value_dimension(value).has_value();
  }
  // dimension_index that throws ArgumentError instead of returning empty.
  size_t require_dimension(std::string_view name) const;
  bool is_value_of(size_t dim, std::string_view value) const {
    return value_dimension(value) == dim;
  }

  // Total number of values across all dimensions.
  size_t value_count() const;

  nlohmann::json to_json() const;
  static AttributeSchema from_json(const nlohmann::json& j);

  friend bool operator==(const AttributeSchema& a, const AttributeSchema& b) {
    return a.dims_ == b.dims_ && a.values_ == b.values_;
  }

 private:
  std::vector<std::string> dims_;
  std::vector<std::vector<std::string>> values_;
  std::map<std::string, size_t, std::less<>> dim_index_;
  std::map<std::string, size_t, std::less<>> value_dim_;
};

}  // namespace vds

#endif  // VDS_SCHEMA_HPP_
