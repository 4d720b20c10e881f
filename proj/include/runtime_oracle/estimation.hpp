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

// Parameter estimation for the application run-time models.
//
// Application time is modeled as
//
//   A = sum_k J_nonit[k] + sum_{i=1..NI} J_it[i] + overhead
//
// Non-iterative jobs get one normal per job index, fitted from that index
// alone. Iterative jobs are either independent draws from one pooled normal,
// or (dependent model) draws from N(a, sigma) where a itself is drawn once per
// application from the normal `a_mean`, fitted from each run's mean
// iterative-job duration. All spreads are sample standard deviations (n - 1).

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "runtime_oracle/trace.hpp"

namespace runtime_oracle {

struct NormalParams {
  double loc = 0.0;
  double scale = 0.0;

  double variance() const { return scale * scale; }

  bool operator==(const NormalParams&) const = default;
};

struct FittedModel {
  std::map<std::size_t, NormalParams> noniter;  // keyed by job index
  NormalParams iter_pooled;
  NormalParams a_mean;
  double iter_scale_dep = 0.0;
  NormalParams overhead;
  std::size_t n_iter_jobs = 0;
  std::size_t n_runs = 0;

  std::size_t job_count() const { return noniter.size() + n_iter_jobs; }
  // Kind of every job index 0..job_count()-1.
  std::vector<JobKind> job_kinds() const;
  // Throws InvariantError on negative/non-finite parameters or NI == 0.
  void validate() const;

  bool operator==(const FittedModel&) const = default;
};

enum class IterScale {
  // Reuse the pooled iterative spread in the dependent model.
  Pooled,
  // Spread of iterative durations around their own run's mean, divisor
  // (total iterative jobs - runs).
  WithinApplication,
};

enum class OverheadMode { Fitted, Zero };

std::string_view to_string(OverheadMode mode);
OverheadMode parse_overhead_mode(std::string_view text);

struct FitOptions {
  IterScale iter_scale = IterScale::Pooled;
  OverheadMode overhead = OverheadMode::Fitted;
};

struct FitResult {
  FittedModel model;
  // Human-readable notes, e.g. runs excluded from overhead estimation.
  std::vector<std::string> warnings;
};

// Sample mean and standard deviation (divisor n - 1). A single value has
// scale 0. Throws InsufficientDataError on an empty input.
NormalParams sample_stats(const std::vector<double>& values);

// Requires >= 2 runs sharing one job count and one job-kind layout with at
// least one iterative job. Runs flagged with negative overhead still feed job
// statistics but are excluded from the overhead estimate.
FitResult fit(const TraceSet& traces, const FitOptions& options = {});

// Pins the overhead term to N(0, 0).
FittedModel with_zero_overhead(FittedModel model);

// JSON document with fields "noniter" (object keyed by job index),
// "iter_pooled", "a_mean", "iter_scale_dep", "overhead", "n_iter_jobs",
// "n_runs"; each normal is {"loc", "scale"}.
std::string serialize_model(const FittedModel& model);
FittedModel parse_model(std::string_view text);

}  // namespace runtime_oracle
