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

#include "runtime_oracle/estimation.hpp"

#include <cmath>

#include <json.hpp>

#include "json_util.hpp"
#include "runtime_oracle/error.hpp"

namespace runtime_oracle {

using nlohmann::json;

std::string_view to_string(OverheadMode mode) {
  return mode == OverheadMode::Zero ? "zero" : "fitted";
}

OverheadMode parse_overhead_mode(std::string_view text) {
  if (text == "fitted") return OverheadMode::Fitted;
  if (text == "zero") return OverheadMode::Zero;
  throw ArgumentError("overhead mode must be 'fitted' or 'zero', got '" +
                      std::string(text) + "'");
}

std::vector<JobKind> FittedModel::job_kinds() const {
  std::vector<JobKind> kinds(job_count(), JobKind::Iterative);
  for (const auto& [index, params] : noniter) {
    if (index < kinds.size()) kinds[index] = JobKind::NonIterative;
  }
  return kinds;
}

void FittedModel::validate() const {
  auto check = [](const NormalParams& p, const std::string& name) {
    if (!std::isfinite(p.loc) || !std::isfinite(p.scale) || p.scale < 0.0) {
      throw InvariantError(name + " must have finite loc and scale >= 0");
    }
  };
  if (n_iter_jobs == 0) throw InvariantError("n_iter_jobs must be positive");
  for (const auto& [index, params] : noniter) {
    if (index >= job_count()) {
      throw InvariantError("noniter index " + std::to_string(index) +
                           " beyond job count " + std::to_string(job_count()));
    }
    check(params, "noniter[" + std::to_string(index) + "]");
  }
  check(iter_pooled, "iter_pooled");
  check(a_mean, "a_mean");
  check(overhead, "overhead");
  check({0.0, iter_scale_dep}, "iter_scale_dep");
}

NormalParams sample_stats(const std::vector<double>& values) {
  if (values.empty()) throw InsufficientDataError("no values to summarize");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

namespace {

std::vector<JobKind> kinds_of(const ApplicationRun& run) {
  std::vector<JobKind> kinds;
  kinds.reserve(run.jobs.size());
  for (const auto& job : run.jobs) kinds.push_back(job.kind);
  return kinds;
}

void check_structure(const TraceSet& traces) {
  const auto& runs = traces.runs;
  if (runs.size() < 2) {
    throw InsufficientDataError("fitting needs at least 2 runs, got " +
                                std::to_string(runs.size()));
  }
  std::map<std::size_t, std::size_t> freq;
  for (const auto& run : runs) ++freq[run.jobs.size()];
  if (freq.size() > 1) {
    std::size_t modal = 0, best = 0;
    for (const auto& [count, n] : freq) {
      if (n > best) best = n, modal = count;
    }
    std::string offenders;
    for (const auto& run : runs) {
      if (run.jobs.size() == modal) continue;
      if (!offenders.empty()) offenders += ", ";
      offenders += run.app_id + " (" + std::to_string(run.jobs.size()) + ")";
    }
    throw StructureError("runs differ from the modal job count " +
                         std::to_string(modal) + ": " + offenders);
  }
  const auto layout = kinds_of(runs.front());
  std::string offenders;
  for (const auto& run : runs) {
    if (kinds_of(run) == layout) continue;
    if (!offenders.empty()) offenders += ", ";
    offenders += run.app_id;
  }
  if (!offenders.empty()) {
    throw StructureError("job kinds differ from run '" + runs.front().app_id +
                         "': " + offenders);
  }
  if (runs.front().iterative_count() == 0) {
    throw StructureError("no iterative jobs; classify the traces first");
  }
}

}  // namespace

FitResult fit(const TraceSet& traces, const FitOptions& options) {
  check_structure(traces);
  const auto& runs = traces.runs;
  const std::size_t n_jobs = runs.front().jobs.size();
  const std::size_t n_iter = runs.front().iterative_count();

  FitResult result;
  FittedModel& model = result.model;
  model.n_runs = runs.size();
  model.n_iter_jobs = n_iter;

  std::vector<double> pooled;
  std::vector<double> run_means;
  pooled.reserve(runs.size() * n_iter);
  for (const auto& run : runs) {
    double run_sum = 0.0;
    for (const auto& job : run.jobs) {
      if (job.kind != JobKind::Iterative) continue;
      pooled.push_back(job.duration());
      run_sum += job.duration();
    }
    run_means.push_back(run_sum / static_cast<double>(n_iter));
  }
  model.iter_pooled = sample_stats(pooled);
  model.a_mean = sample_stats(run_means);

  for (std::size_t k = 0; k < n_jobs; ++k) {
    if (runs.front().jobs[k].kind != JobKind::NonIterative) continue;
    std::vector<double> durations;
    durations.reserve(runs.size());
    for (const auto& run : runs) durations.push_back(run.jobs[k].duration());
    model.noniter[k] = sample_stats(durations);
  }

  if (options.iter_scale == IterScale::Pooled) {
    model.iter_scale_dep = model.iter_pooled.scale;
  } else {
    double ss = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (const auto& job : runs[r].jobs) {
        if (job.kind != JobKind::Iterative) continue;
        const double d = job.duration() - run_means[r];
        ss += d * d;
      }
    }
    const std::size_t dof = pooled.size() - runs.size();
    model.iter_scale_dep = dof > 0 ? std::sqrt(ss / static_cast<double>(dof))
                                   : 0.0;
  }

  if (options.overhead == OverheadMode::Zero) {
    model.overhead = {0.0, 0.0};
  } else {
    std::vector<double> residuals;
    for (const auto& run : runs) {
      const double overhead = run.overhead();
      if (overhead < 0.0) {
        result.warnings.push_back("run '" + run.app_id +
                                  "' has negative overhead " +
                                  std::to_string(overhead) +
                                  " s; excluded from overhead estimate");
        continue;
      }
      residuals.push_back(overhead);
    }
    if (residuals.empty()) {
      throw InsufficientDataError(
          "every run has negative overhead; nothing left to estimate it from");
    }
    if (residuals.size() == 1) {
      result.warnings.push_back(
          "overhead estimated from a single run; its scale is set to 0");
    }
    model.overhead = sample_stats(residuals);
  }
  return result;
}

FittedModel with_zero_overhead(FittedModel model) {
  model.overhead = {0.0, 0.0};
  return model;
}

namespace {

json normal_to_json(const NormalParams& p) {
  return {{"loc", p.loc}, {"scale", p.scale}};
}

NormalParams normal_from_json(const detail::JsonReader& node) {
  return {node.child("loc").as_number(), node.child("scale").as_number()};
}

}  // namespace

std::string serialize_model(const FittedModel& model) {
  json noniter = json::object();
  for (const auto& [index, params] : model.noniter) {
    noniter[std::to_string(index)] = normal_to_json(params);
  }
  json doc = {{"noniter", std::move(noniter)},
              {"iter_pooled", normal_to_json(model.iter_pooled)},
              {"a_mean", normal_to_json(model.a_mean)},
              {"iter_scale_dep", model.iter_scale_dep},
              {"overhead", normal_to_json(model.overhead)},
              {"n_iter_jobs", model.n_iter_jobs},
              {"n_runs", model.n_runs}};
  return doc.dump(2) + "\n";
}

FittedModel parse_model(std::string_view text) {
  const json doc = detail::parse_json(text);
  const detail::JsonReader root(doc, "");
  FittedModel model;
  const auto noniter = root.child("noniter");
  noniter.require_object();
  for (const auto& [key, value] : noniter.node().items()) {
    const detail::JsonReader entry(value, noniter.path() + "/" + key);
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError(entry.path(), "noniter key is not a job index");
    }
    model.noniter[index] = normal_from_json(entry);
  }
  model.iter_pooled = normal_from_json(root.child("iter_pooled"));
  model.a_mean = normal_from_json(root.child("a_mean"));
  model.iter_scale_dep = root.child("iter_scale_dep").as_number();
  model.overhead = normal_from_json(root.child("overhead"));
  model.n_iter_jobs = root.child("n_iter_jobs").as_index();
  model.n_runs = root.child("n_runs").as_index();
  try {
    model.validate();
  } catch (const InvariantError& e) {
    throw ParseError("/", e.what());
  }
  return model;
}

}  // namespace runtime_oracle
