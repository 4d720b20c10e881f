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

// Spark event-log ingestion.
//
// A Spark event log is a JSON-lines stream with one listener event per line.
// Only application and job boundaries are consumed:
//
//   SparkListenerApplicationStart / End   "Timestamp"        (epoch ms)
//   SparkListenerJobStart                 "Job ID", "Submission Time"
//   SparkListenerJobEnd                   "Job ID", "Completion Time",
//                                         "Job Result"
//
// Every other event (stages, tasks, executors, ...) is skipped. Timestamps are
// converted to seconds here; nothing downstream sees milliseconds.

#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "runtime_oracle/error.hpp"
#include "runtime_oracle/trace.hpp"

namespace runtime_oracle {

struct RawEvent {
  std::string event_name;
  nlohmann::json payload;
};

// The log lacks an application boundary event.
class LogStructureError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Parses one event-log line. Throws ParseError("line N") on malformed JSON or
// a missing/empty "Event" field.
RawEvent parse_event_line(std::string_view line, std::size_t line_number);

enum class WallClock {
  // ApplicationStart to ApplicationEnd.
  Application,
  // First job submission to last job completion; offsets are taken from the
  // first submission.
  JobSpan,
};

struct IngestOptions {
  WallClock wall_clock = WallClock::Application;
};

// Reads a single-application event log. All jobs come back NonIterative and
// indexed 0..n-1 in ascending "Job ID" order.
ApplicationRun parse_event_log(std::istream& lines, std::string app_id = {},
                               const IngestOptions& options = {});

ApplicationRun parse_event_log_file(const std::filesystem::path& path,
                                    const IngestOptions& options = {});

// One run per file, classified with `window` and audited. Directories are
// expanded to the regular files they contain; files are processed in sorted
// path order. Throws AggregateError listing every failing file, or
// EmptyInputError if nothing was parsed.
TraceSet ingest_directory(std::vector<std::filesystem::path> paths,
                      IterativeWindow window,
                      const IngestOptions& options = {});

}  // namespace runtime_oracle
