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

#include "runtime_oracle/online.hpp"

#include <cmath>

#include "runtime_oracle/error.hpp"
#include "sampling.hpp"

namespace runtime_oracle {

std::string_view to_string(Variant variant) {
  return variant == Variant::AdaptiveAMean ? "adaptive" : "fixed";
}

Variant parse_variant(std::string_view text) {
  if (text == "fixed") return Variant::FixedAMean;
  if (text == "adaptive") return Variant::AdaptiveAMean;
  throw ArgumentError("variant must be 'fixed' or 'adaptive', got '" +
                      std::string(text) + "'");
}

OnlineState::OnlineState(FittedModel model, Variant variant)
    : model_(std::move(model)), variant_(variant) {
  model_.validate();
  kinds_ = model_.job_kinds();
  for (const auto& [index, params] : model_.noniter) {
    remaining_noniter_.push_back(index);
  }
  remaining_iter_count_ = model_.n_iter_jobs;
  working_a_mean_ = model_.a_mean;
}

OnlineState OnlineState::advance(const JobRecord& job) const {
  if (complete()) {
    throw SequenceError("job " + std::to_string(job.index) +
                        " arrived after every job finished");
  }
  if (job.index != next_index()) {
    throw SequenceError("expected job " + std::to_string(next_index()) +
                        ", got job " + std::to_string(job.index));
  }
  if (job.kind != kinds_[job.index]) {
    throw StructureError("job " + std::to_string(job.index) + " is " +
                         std::string(to_string(job.kind)) +
                         " but the model expects " +
                         std::string(to_string(kinds_[job.index])));
  }
  const double duration = job.duration();
  if (!std::isfinite(duration) || duration < 0.0) {
    throw InvariantError("job " + std::to_string(job.index) +
                         " has an invalid duration");
  }

  OnlineState next = *this;
  next.finished_.push_back({job.index, job.kind, duration});
  next.finished_sum_ += duration;
  if (job.kind == JobKind::Iterative) {
    --next.remaining_iter_count_;
    next.observed_iter_sum_ += duration;
    ++next.observed_iter_count_;
    if (variant_ == Variant::AdaptiveAMean) {
      next.working_a_mean_.loc =
          next.observed_iter_sum_ /
          static_cast<double>(next.observed_iter_count_);
    }
  } else {
    std::erase(next.remaining_noniter_, job.index);
  }
  return next;
}

PredictiveSample predict_total(const OnlineState& state, std::size_t samples,
                               std::uint64_t seed,
                               const OnlineOptions& options) {
  if (samples == 0) throw ArgumentError("sample count must be at least 1");
  const FittedModel& model = state.model();
  std::vector<NormalParams> noniter;
  for (std::size_t index : state.remaining_noniter()) {
    noniter.push_back(model.noniter.at(index));
  }
  const std::size_t m = state.remaining_iter_count();
  const double base = state.finished_sum();
  const NormalParams a_mean = state.working_a_mean();
  const bool dependent = options.structure == ModelKind::Dependent;

  PredictiveSample out;
  out.model_kind = options.structure;
  detail::fill_samples(
      out, samples, seed, options.threads,
      [&](RandomStream& rng, detail::DrawCounter& count) {
        double total = base;
        for (const auto& p : noniter) total += count(rng.normal(p.loc, p.scale));
        if (m > 0) {
          if (dependent) {
            const double app = rng.normal(a_mean.loc, a_mean.scale);
            for (std::size_t i = 0; i < m; ++i) {
              total += count(rng.normal(app, model.iter_scale_dep));
            }
          } else {
            for (std::size_t i = 0; i < m; ++i) {
              total += count(
                  rng.normal(model.iter_pooled.loc, model.iter_pooled.scale));
            }
          }
        }
        total += count(rng.normal(model.overhead.loc, model.overhead.scale));
        return total;
      });
  return out;
}

double predictive_mean(const OnlineState& state, ModelKind structure) {
  const FittedModel& model = state.model();
  double mean = state.finished_sum() + model.overhead.loc;
  for (std::size_t index : state.remaining_noniter()) {
    mean += model.noniter.at(index).loc;
  }
  const double iter_loc = structure == ModelKind::Dependent
                              ? state.working_a_mean().loc
                              : model.iter_pooled.loc;
  return mean + static_cast<double>(state.remaining_iter_count()) * iter_loc;
}

double predictive_variance(const OnlineState& state, ModelKind structure) {
  const FittedModel& model = state.model();
  const double m = static_cast<double>(state.remaining_iter_count());
  double var = model.overhead.variance();
  for (std::size_t index : state.remaining_noniter()) {
    var += model.noniter.at(index).variance();
  }
  if (structure == ModelKind::Independent) {
    return var + m * model.iter_pooled.variance();
  }
  return var + m * m * state.working_a_mean().variance() +
         m * model.iter_scale_dep * model.iter_scale_dep;
}

Trajectory run_trajectory(const FittedModel& model, const ApplicationRun& actual,
                          Variant variant, std::size_t samples,
                          std::uint64_t seed, const OnlineOptions& options) {
  if (samples == 0) throw ArgumentError("sample count must be at least 1");
  const auto kinds = model.job_kinds();
  if (actual.jobs.size() != kinds.size()) {
    throw StructureError("run '" + actual.app_id + "' has " +
                         std::to_string(actual.jobs.size()) +
                         " jobs, the model expects " +
                         std::to_string(kinds.size()));
  }
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (actual.jobs[i].index != i || actual.jobs[i].kind != kinds[i]) {
      throw StructureError("run '" + actual.app_id + "' job " +
                           std::to_string(i) +
                           " does not match the model's job layout");
    }
  }

  static constexpr double kLevels[] = {0.10, 0.20, 0.50, 0.80, 0.90};
  Trajectory trajectory;
  OnlineState state(model, variant);
  auto emit = [&](long long after) {
    const auto sample = predict_total(state, samples, seed, options);
    const auto q = quantiles(sample.values, kLevels);
    trajectory.points.push_back({after, q[0], q[1], q[2], q[3], q[4]});
  };
  emit(-1);
  for (const auto& job : actual.jobs) {
    state = state.advance(job);
    emit(static_cast<long long>(job.index));
  }
  const bool pinned = model.overhead == NormalParams{0.0, 0.0};
  trajectory.actual_total =
      state.finished_sum() + (pinned ? 0.0 : actual.overhead());
  return trajectory;
}

std::string format_trajectory_csv(const Trajectory& trajectory) {
  using detail::format_double;
  std::string out = "after_job_index,p10,p20,p50,p80,p90,actual_total\n";
  for (const auto& p : trajectory.points) {
    out += std::to_string(p.after_job_index);
    for (double v : {p.p10, p.p20, p.p50, p.p80, p.p90,
                     trajectory.actual_total}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace runtime_oracle
