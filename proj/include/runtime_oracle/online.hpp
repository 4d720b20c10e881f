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

// Online re-estimation of a running application's total run time.
//
// After each finished job the job leaves the set of random terms and its
// observed duration becomes a constant. The predicted total is
//
//   finished-sum + remaining non-iterative draws + remaining iterative draws
//   + overhead draw
//
// so it can never drift below the elapsed job time in expectation. With the
// adaptive variant the location of the application-mean term is replaced by
// the average of the iterative durations observed so far; its scale stays
// fixed.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "runtime_oracle/estimation.hpp"
#include "runtime_oracle/predictor.hpp"
#include "runtime_oracle/trace.hpp"

namespace runtime_oracle {

enum class Variant { FixedAMean, AdaptiveAMean };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

struct FinishedJob {
  std::size_t index = 0;
  JobKind kind = JobKind::NonIterative;
  double duration = 0.0;
};

// Immutable snapshot of a partially executed application.
class OnlineState {
 public:
  OnlineState(FittedModel model, Variant variant);

  const FittedModel& model() const { return model_; }
  Variant variant() const { return variant_; }
  const std::vector<FinishedJob>& finished() const { return finished_; }
  const std::vector<std::size_t>& remaining_noniter() const {
    return remaining_noniter_;
  }
  std::size_t remaining_iter_count() const { return remaining_iter_count_; }
  // a_mean with the adaptive location applied, if any.
  const NormalParams& working_a_mean() const { return working_a_mean_; }
  double finished_sum() const { return finished_sum_; }
  std::size_t next_index() const { return finished_.size(); }
  bool complete() const { return finished_.size() == kinds_.size(); }

  // Returns the state after `job` finishes. Throws SequenceError unless `job`
  // is the next unfinished index, StructureError if its kind disagrees with
  // the model, InvariantError if its duration is negative or not finite.
  OnlineState advance(const JobRecord& job) const;

 private:
  FittedModel model_;
  Variant variant_;
  std::vector<JobKind> kinds_;
  std::vector<FinishedJob> finished_;
  std::vector<std::size_t> remaining_noniter_;
  std::size_t remaining_iter_count_ = 0;
  NormalParams working_a_mean_;
  double finished_sum_ = 0.0;
  double observed_iter_sum_ = 0.0;
  std::size_t observed_iter_count_ = 0;
};

inline OnlineState advance(const OnlineState& state, const JobRecord& job) {
  return state.advance(job);
}

struct OnlineOptions {
  // Dependent structure is the default; Independent draws every remaining
  // iterative job from iter_pooled and ignores the working a_mean.
  ModelKind structure = ModelKind::Dependent;
  unsigned threads = 0;
};

// Samples of the predicted TOTAL run time from `state`. Per sample, draws
// happen in the order: remaining non-iterative jobs by index, the application
// mean (only if iterative jobs remain), remaining iterative jobs, overhead.
PredictiveSample predict_total(const OnlineState& state, std::size_t samples,
                               std::uint64_t seed,
                               const OnlineOptions& options = {});

double predictive_mean(const OnlineState& state,
                       ModelKind structure = ModelKind::Dependent);
// Dependent: sum_{k in R} s_k^2 + m^2 s_A^2 + m s^2 + s_overhead^2.
double predictive_variance(const OnlineState& state,
                           ModelKind structure = ModelKind::Dependent);

struct TrajectoryPoint {
  // -1 for the prediction before any job has finished.
  long long after_job_index = -1;
  double p10 = 0.0;
  double p20 = 0.0;
  double p50 = 0.0;
  double p80 = 0.0;
  double p90 = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // n_jobs + 1 entries
  // Observed job-time sum plus the observed overhead; the overhead is left
  // out when the model's overhead term is pinned to N(0, 0).
  double actual_total = 0.0;
};

// Replays `actual` job by job, predicting the total before the first job and
// after every job. Each step samples with the same seed. Throws
// StructureError if the run's job layout differs from the model's.
Trajectory run_trajectory(const FittedModel& model, const ApplicationRun& actual,
                          Variant variant, std::size_t samples,
                          std::uint64_t seed, const OnlineOptions& options = {});

// "after_job_index,p10,p20,p50,p80,p90,actual_total"
std::string format_trajectory_csv(const Trajectory& trajectory);

}  // namespace runtime_oracle
