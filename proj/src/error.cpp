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

#include "runtime_oracle/error.hpp"

namespace runtime_oracle {

namespace {

std::string join_ids(const std::vector<long long>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& failures) {
  std::string out = std::to_string(failures.size()) + " input(s) failed";
  for (const auto& f : failures) out += "\n  " + f;
  return out;
}

}  // namespace

IncompleteJobError::IncompleteJobError(const std::string& path,
                                       std::vector<long long> job_ids)
    : ParseError(path, "job(s) started but never ended: " + join_ids(job_ids)),
      job_ids_(std::move(job_ids)) {}

AggregateError::AggregateError(std::vector<std::string> failures)
    : Error(join_lines(failures)), failures_(std::move(failures)) {}

}  // namespace runtime_oracle
