// Copyright 2026 The runtime-oracle Authors.
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

// Path-tracking accessors over nlohmann::json. Every failure is a ParseError
// carrying the JSON pointer of the offending element.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "runtime_oracle/error.hpp"

namespace runtime_oracle::detail {

inline nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("malformed document: ") + e.what());
  }
}

class JsonReader {
 public:
  JsonReader(const nlohmann::json& node, std::string path)
      : node_(&node), path_(std::move(path)) {}

  const nlohmann::json& node() const { return *node_; }
  const std::string& path() const { return path_; }
  std::string display_path() const { return path_.empty() ? "/" : path_; }

  void require_object() const {
    if (!node_->is_object()) throw ParseError(display_path(), "expected object");
  }
  void require_array() const {
    if (!node_->is_array()) throw ParseError(display_path(), "expected array");
  }

  bool has(const std::string& key) const {
    return node_->is_object() && node_->contains(key);
  }

  JsonReader child(const std::string& key) const {
    require_object();
    auto it = node_->find(key);
    if (it == node_->end()) {
      throw ParseError(path_ + "/" + key, "missing field");
    }
    return JsonReader(*it, path_ + "/" + key);
  }

  JsonReader at(std::size_t i) const {
    require_array();
    if (i >= node_->size()) {
      throw ParseError(path_ + "/" + std::to_string(i), "missing element");
    }
    return JsonReader((*node_)[i], path_ + "/" + std::to_string(i));
  }

  double as_number() const {
    if (!node_->is_number()) throw ParseError(path_, "expected number");
    const double v = node_->get<double>();
    if (!std::isfinite(v)) throw ParseError(path_, "number is not finite");
    return v;
  }

  std::size_t as_index() const {
    if (!node_->is_number_integer() || node_->get<long long>() < 0) {
      throw ParseError(path_, "expected non-negative integer");
    }
    return node_->get<std::size_t>();
  }

  std::uint64_t as_u64() const {
    if (!node_->is_number_integer() ||
        (node_->is_number_integer() && !node_->is_number_unsigned() &&
         node_->get<long long>() < 0)) {
      throw ParseError(path_, "expected non-negative integer");
    }
    return node_->get<std::uint64_t>();
  }

  std::string as_string() const {
    if (!node_->is_string()) throw ParseError(path_, "expected string");
    return node_->get<std::string>();
  }

 private:
  const nlohmann::json* node_;
  std::string path_;
};

}  // namespace runtime_oracle::detail
