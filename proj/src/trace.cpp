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

#include "runtime_oracle/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <json.hpp>

#include "json_util.hpp"
#include "runtime_oracle/error.hpp"

namespace runtime_oracle {

using nlohmann::json;

std::string_view to_string(JobKind kind) {
  return kind == JobKind::Iterative ? "iterative" : "non_iterative";
}

std::string_view to_string(RunFlagReason reason) {
  switch (reason) {
    case RunFlagReason::NegativeOverhead:
      return "negative_overhead";
    case RunFlagReason::JobCountMismatch:
      return "job_count_mismatch";
  }
  return "unknown";
}

double ApplicationRun::job_time_sum() const {
  double sum = 0.0;
  for (const auto& job : jobs) sum += job.duration();
  return sum;
}

double ApplicationRun::overhead() const { return wall_time_s - job_time_sum(); }

std::size_t ApplicationRun::iterative_count() const {
  return static_cast<std::size_t>(
      std::count_if(jobs.begin(), jobs.end(), [](const JobRecord& j) {
        return j.kind == JobKind::Iterative;
      }));
}

bool TraceSet::is_flagged(std::size_t run, RunFlagReason reason) const {
  return std::find(flags.begin(), flags.end(), RunFlag{run, reason}) !=
         flags.end();
}

IterativeWindow parse_window(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("window must be FIRST:LAST, got '" + std::string(text) +
                        "'");
  }
  auto parse_part = [&](std::string_view part) {
    std::size_t value = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc() || ptr != end) {
      throw ArgumentError("bad window bound '" + std::string(part) + "'");
    }
    return value;
  };
  IterativeWindow window{parse_part(text.substr(0, colon)),
                         parse_part(text.substr(colon + 1))};
  if (window.first > window.last) {
    throw ArgumentError("window first index exceeds last index");
  }
  return window;
}

namespace {

struct Violation {
  std::string path;  // relative to the run
  std::string message;
};

std::optional<Violation> find_violation(const ApplicationRun& run) {
  if (run.jobs.empty()) return Violation{"/jobs", "run has no jobs"};
  if (!std::isfinite(run.wall_time_s)) {
    return Violation{"/wall_time_s", "wall time is not finite"};
  }
  double max_end = 0.0;
  for (std::size_t i = 0; i < run.jobs.size(); ++i) {
    const auto& job = run.jobs[i];
    const std::string path = "/jobs/" + std::to_string(i);
    if (job.index != i) {
      if (job.index > i) {
        return Violation{path, "job index " + std::to_string(i) + " missing"};
      }
      return Violation{path, "duplicate or out-of-order job index " +
                                 std::to_string(job.index)};
    }
    if (!std::isfinite(job.start_s) || !std::isfinite(job.end_s)) {
      return Violation{path, "job offsets are not finite"};
    }
    if (job.start_s < 0.0) return Violation{path, "start_s is negative"};
    if (job.end_s < job.start_s) {
      return Violation{path, "end_s precedes start_s"};
    }
    max_end = std::max(max_end, job.end_s);
  }
  if (run.wall_time_s < max_end) {
    return Violation{"/wall_time_s", "wall time ends before the last job"};
  }
  return std::nullopt;
}

std::optional<Violation> find_window_violation(const ApplicationRun& run,
                                               IterativeWindow window) {
  if (window.first > window.last) {
    return Violation{"", "iterative window first exceeds last"};
  }
  if (window.last >= run.jobs.size()) {
    return Violation{"", "iterative window index " +
                             std::to_string(window.last) +
                             " beyond last job index " +
                             std::to_string(run.jobs.size() - 1)};
  }
  for (std::size_t i = 0; i < run.jobs.size(); ++i) {
    const auto expected =
        window.contains(i) ? JobKind::Iterative : JobKind::NonIterative;
    if (run.jobs[i].kind != expected) {
      return Violation{"/jobs/" + std::to_string(i) + "/kind",
                       "kind disagrees with iterative window"};
    }
  }
  return std::nullopt;
}

}  // namespace

void validate(const ApplicationRun& run) {
  if (auto v = find_violation(run)) {
    throw InvariantError("run '" + run.app_id + "'" + v->path + ": " +
                         v->message);
  }
}

ApplicationRun classify_jobs(const ApplicationRun& run,
                             IterativeWindow window) {
  if (window.first > window.last) {
    throw BoundsError("window first index " + std::to_string(window.first) +
                          " exceeds last index " + std::to_string(window.last),
                      static_cast<long long>(window.first));
  }
  for (std::size_t bound : {window.first, window.last}) {
    if (bound >= run.jobs.size()) {
      throw BoundsError("window index " + std::to_string(bound) +
                            " out of range for run '" + run.app_id +
                            "' with " + std::to_string(run.jobs.size()) +
                            " jobs",
                        static_cast<long long>(bound));
    }
  }
  ApplicationRun out = run;
  for (auto& job : out.jobs) {
    job.kind =
        window.contains(job.index) ? JobKind::Iterative : JobKind::NonIterative;
  }
  return out;
}

void audit(TraceSet& traces) {
  traces.flags.clear();
  std::map<std::size_t, std::size_t> count_freq;
  for (const auto& run : traces.runs) ++count_freq[run.jobs.size()];
  std::size_t modal = 0;
  std::size_t best = 0;
  for (const auto& [count, freq] : count_freq) {
    if (freq > best) {
      best = freq;
      modal = count;
    }
  }
  for (std::size_t i = 0; i < traces.runs.size(); ++i) {
    const auto& run = traces.runs[i];
    if (run.overhead() < 0.0) {
      traces.flags.push_back({i, RunFlagReason::NegativeOverhead});
    }
    if (run.jobs.size() != modal) {
      traces.flags.push_back({i, RunFlagReason::JobCountMismatch});
    }
  }
}

std::string serialize_traces(const TraceSet& traces) {
  json doc;
  doc["runs"] = json::array();
  for (const auto& run : traces.runs) {
    json jobs = json::array();
    for (const auto& job : run.jobs) {
      jobs.push_back({{"index", job.index},
                      {"kind", to_string(job.kind)},
                      {"start_s", job.start_s},
                      {"end_s", job.end_s}});
    }
    doc["runs"].push_back({{"app_id", run.app_id},
                           {"wall_time_s", run.wall_time_s},
                           {"jobs", std::move(jobs)}});
  }
  if (traces.iterative_window) {
    doc["iterative_window"] = {traces.iterative_window->first,
                               traces.iterative_window->last};
  } else {
    doc["iterative_window"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

TraceSet parse_traces(std::string_view text) {
  const json doc = detail::parse_json(text);
  detail::JsonReader root(doc, "");
  TraceSet traces;

  const auto window_node = root.child("iterative_window");
  if (!window_node.node().is_null()) {
    if (!window_node.node().is_array() || window_node.node().size() != 2) {
      throw ParseError(window_node.path(), "expected [first, last] or null");
    }
    traces.iterative_window = IterativeWindow{window_node.at(0).as_index(),
                                              window_node.at(1).as_index()};
  }

  const auto runs = root.child("runs");
  runs.require_array();
  for (std::size_t r = 0; r < runs.node().size(); ++r) {
    const auto run_node = runs.at(r);
    run_node.require_object();
    ApplicationRun run;
    run.app_id = run_node.child("app_id").as_string();
    run.wall_time_s = run_node.child("wall_time_s").as_number();
    const auto jobs = run_node.child("jobs");
    jobs.require_array();
    for (std::size_t j = 0; j < jobs.node().size(); ++j) {
      const auto job_node = jobs.at(j);
      job_node.require_object();
      JobRecord job;
      job.index = job_node.child("index").as_index();
      const auto kind_node = job_node.child("kind");
      const auto kind = kind_node.as_string();
      if (kind == "iterative") {
        job.kind = JobKind::Iterative;
      } else if (kind == "non_iterative") {
        job.kind = JobKind::NonIterative;
      } else {
        throw ParseError(kind_node.path(), "unknown job kind '" + kind + "'");
      }
      job.start_s = job_node.child("start_s").as_number();
      job.end_s = job_node.child("end_s").as_number();
      run.jobs.push_back(job);
    }
    if (auto v = find_violation(run)) {
      throw ParseError(run_node.path() + v->path, v->message);
    }
    if (traces.iterative_window) {
      if (auto v = find_window_violation(run, *traces.iterative_window)) {
        throw ParseError(run_node.path() + v->path, v->message);
      }
    }
    traces.runs.push_back(std::move(run));
  }
  audit(traces);
  return traces;
}

}  // namespace runtime_oracle
