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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace runtime_oracle {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied argument (sample count of zero, q outside [0,1], ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A value that violates a documented data invariant.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Index outside the valid range. `index()` is the offending index.
class BoundsError : public InvariantError {
 public:
  BoundsError(const std::string& what, long long index)
      : InvariantError(what), index_(index) {}
  long long index() const { return index_; }

 private:
  long long index_;
};

// Runs whose job structure does not line up (job counts, kinds, windows).
class StructureError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

class InsufficientDataError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

// Online replay received a job out of order.
class SequenceError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

// Malformed input document. `path()` locates the offending element, either a
// JSON pointer ("/runs/0/jobs/1") or "line N" for line-oriented inputs.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A job was submitted but never completed.
class IncompleteJobError : public ParseError {
 public:
  IncompleteJobError(const std::string& path, std::vector<long long> job_ids);
  const std::vector<long long>& job_ids() const { return job_ids_; }

 private:
  std::vector<long long> job_ids_;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Several independent inputs failed; each entry is "<source>: <message>".
class AggregateError : public Error {
 public:
  explicit AggregateError(std::vector<std::string> failures);
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

}  // namespace runtime_oracle
