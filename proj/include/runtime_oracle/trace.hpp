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

// Application and job traces.
//
// An application run is an ordered sequence of serially executed jobs. Each
// job is stored as start/end offsets (seconds from application start) so that
// the spawn overhead, wall time minus the sum of job durations, can be
// audited. Job kinds are materialized per job; `classify_jobs` assigns them
// from an inclusive window of iterative job indices.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace runtime_oracle {

enum class JobKind { Iterative, NonIterative };

std::string_view to_string(JobKind kind);

struct JobRecord {
  std::size_t index = 0;
  JobKind kind = JobKind::NonIterative;
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }

  bool operator==(const JobRecord&) const = default;
};

struct ApplicationRun {
  std::string app_id;
  double wall_time_s = 0.0;
  std::vector<JobRecord> jobs;

  double job_time_sum() const;
  // Wall time minus the job-duration sum. Negative only when jobs overlap.
  double overhead() const;
  std::size_t iterative_count() const;

  bool operator==(const ApplicationRun&) const = default;
};

// Inclusive range [first, last] of iterative job indices.
struct IterativeWindow {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t width() const { return last - first + 1; }
  bool contains(std::size_t index) const {
    return index >= first && index <= last;
  }

  bool operator==(const IterativeWindow&) const = default;
};

// Parses "FIRST:LAST".
IterativeWindow parse_window(std::string_view text);

enum class RunFlagReason { NegativeOverhead, JobCountMismatch };

std::string_view to_string(RunFlagReason reason);

struct RunFlag {
  std::size_t run = 0;  // position in TraceSet::runs
  RunFlagReason reason = RunFlagReason::NegativeOverhead;

  bool operator==(const RunFlag&) const = default;
};

struct TraceSet {
  std::vector<ApplicationRun> runs;
  std::optional<IterativeWindow> iterative_window;
  // Derived from `runs` by `audit`; not part of the serialized document.
  std::vector<RunFlag> flags;

  bool is_flagged(std::size_t run, RunFlagReason reason) const;

  bool operator==(const TraceSet&) const = default;
};

// Throws InvariantError (with the run's app_id) if any job or run invariant
// is violated. Negative overhead is not a violation.
void validate(const ApplicationRun& run);

// Returns a copy of `run` with jobs in [window.first, window.last] marked
// Iterative and all others NonIterative. Throws BoundsError naming the
// offending index if the window does not fit the run.
ApplicationRun classify_jobs(const ApplicationRun& run, IterativeWindow window);

// Recomputes `traces.flags`: runs with negative overhead, and runs whose job
// count differs from the modal job count (ties resolve to the smaller count).
void audit(TraceSet& traces);

// Canonical JSON document:
//   {"runs": [{"app_id", "wall_time_s", "jobs": [{"index", "kind",
//    "start_s", "end_s"}]}], "iterative_window": [first, last] | null}
std::string serialize_traces(const TraceSet& traces);

// Parses and validates a canonical document; flags are recomputed. Throws
// ParseError whose path is a JSON pointer to the offending element.
TraceSet parse_traces(std::string_view text);

}  // namespace runtime_oracle
