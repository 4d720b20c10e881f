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

#include "runtime_oracle/spark_ingest.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>

namespace runtime_oracle {

using nlohmann::json;

namespace {

constexpr std::string_view kAppStart = "SparkListenerApplicationStart";
constexpr std::string_view kAppEnd = "SparkListenerApplicationEnd";
constexpr std::string_view kJobStart = "SparkListenerJobStart";
constexpr std::string_view kJobEnd = "SparkListenerJobEnd";

std::string line_path(std::size_t line_number) {
  return "line " + std::to_string(line_number);
}

std::int64_t int_field(const RawEvent& event, const char* key,
                       std::size_t line_number) {
  auto it = event.payload.find(key);
  if (it == event.payload.end()) {
    throw ParseError(line_path(line_number), event.event_name +
                                                 " lacks \"" + key + "\"");
  }
  if (!it->is_number_integer()) {
    throw ParseError(line_path(line_number),
                     "\"" + std::string(key) + "\" is not an integer");
  }
  return it->get<std::int64_t>();
}

struct JobTimes {
  std::optional<std::int64_t> submitted;
  std::optional<std::int64_t> completed;
};

}  // namespace

RawEvent parse_event_line(std::string_view line, std::size_t line_number) {
  json payload;
  try {
    payload = json::parse(line.begin(), line.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_path(line_number),
                     std::string("unparseable event: ") + e.what());
  }
  if (!payload.is_object()) {
    throw ParseError(line_path(line_number), "event is not a JSON object");
  }
  auto it = payload.find("Event");
  if (it == payload.end() || !it->is_string() ||
      it->get_ref<const std::string&>().empty()) {
    throw ParseError(line_path(line_number), "missing \"Event\" name");
  }
  RawEvent event;
  event.event_name = it->get<std::string>();
  event.payload = std::move(payload);
  return event;
}

ApplicationRun parse_event_log(std::istream& lines, std::string app_id,
                               const IngestOptions& options) {
  std::optional<std::int64_t> app_start;
  std::optional<std::int64_t> app_end;
  std::map<std::int64_t, JobTimes> jobs;

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const RawEvent event = parse_event_line(line, line_number);
    const std::string& name = event.event_name;
    if (name == kAppStart) {
      if (app_start) {
        throw LogStructureError(line_path(line_number),
                                "second application start in one log");
      }
      app_start = int_field(event, "Timestamp", line_number);
    } else if (name == kAppEnd) {
      app_end = int_field(event, "Timestamp", line_number);
    } else if (name == kJobStart) {
      const auto id = int_field(event, "Job ID", line_number);
      auto& times = jobs[id];
      if (times.submitted) {
        throw ParseError(line_path(line_number),
                         "job " + std::to_string(id) + " started twice");
      }
      times.submitted = int_field(event, "Submission Time", line_number);
    } else if (name == kJobEnd) {
      const auto id = int_field(event, "Job ID", line_number);
      if (!event.payload.contains("Job Result")) {
        throw ParseError(line_path(line_number),
                         "job end lacks \"Job Result\"");
      }
      auto& times = jobs[id];
      if (times.completed) {
        throw ParseError(line_path(line_number),
                         "job " + std::to_string(id) + " ended twice");
      }
      times.completed = int_field(event, "Completion Time", line_number);
    }
  }

  if (!app_start) {
    throw LogStructureError("", "no " + std::string(kAppStart) + " event");
  }
  if (!app_end) {
    throw LogStructureError("", "no " + std::string(kAppEnd) + " event");
  }

  std::vector<long long> incomplete;
  for (const auto& [id, times] : jobs) {
    if (!times.submitted) {
      throw ParseError("", "job " + std::to_string(id) +
                               " ended without a start event");
    }
    if (!times.completed) incomplete.push_back(id);
  }
  if (!incomplete.empty()) throw IncompleteJobError("", incomplete);

  std::int64_t origin = *app_start;
  std::int64_t finish = *app_end;
  if (options.wall_clock == WallClock::JobSpan && !jobs.empty()) {
    origin = jobs.begin()->second.submitted.value();
    finish = origin;
    for (const auto& [id, times] : jobs) {
      origin = std::min(origin, *times.submitted);
      finish = std::max(finish, *times.completed);
    }
  }

  ApplicationRun run;
  run.app_id = std::move(app_id);
  run.wall_time_s = static_cast<double>(finish - origin) / 1000.0;
  std::size_t index = 0;
  for (const auto& [id, times] : jobs) {
    JobRecord job;
    job.index = index++;
    job.kind = JobKind::NonIterative;
    job.start_s = static_cast<double>(*times.submitted - origin) / 1000.0;
    job.end_s = static_cast<double>(*times.completed - origin) / 1000.0;
    run.jobs.push_back(job);
  }
  validate(run);
  return run;
}

ApplicationRun parse_event_log_file(const std::filesystem::path& path,
                                    const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  return parse_event_log(in, path.stem().string(), options);
}

TraceSet ingest_directory(std::vector<std::filesystem::path> paths,
                          IterativeWindow window,
                          const IngestOptions& options) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (const auto& entry : std::filesystem::directory_iterator(p)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyInputError("no event-log files to ingest");

  TraceSet traces;
  traces.iterative_window = window;
  std::vector<std::string> failures;
  for (const auto& file : files) {
    try {
      traces.runs.push_back(
          classify_jobs(parse_event_log_file(file, options), window));
    } catch (const Error& e) {
      failures.push_back(file.string() + ": " + e.what());
    }
  }
  if (!failures.empty()) throw AggregateError(std::move(failures));
  audit(traces);
  return traces;
}

}  // namespace runtime_oracle
