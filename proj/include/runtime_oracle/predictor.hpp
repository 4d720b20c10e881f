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

// Monte Carlo forward sampling of application run time, plus the order
// statistics used to summarize and compare samples.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "runtime_oracle/estimation.hpp"

namespace runtime_oracle {

enum class ModelKind { Independent, Dependent };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

inline constexpr std::size_t kDefaultSamples = 10000;

struct PredictiveSample {
  std::vector<double> values;
  ModelKind model_kind = ModelKind::Independent;
  std::uint64_t seed = 0;
  // Sampled job or overhead terms that came out negative. They are kept in
  // the sums; the count is a diagnostic only.
  std::size_t negative_draws = 0;
};

struct SamplingOptions {
  // 0 selects default_thread_count().
  unsigned threads = 0;
};

// RUNTIME_ORACLE_THREADS if set to a positive integer, else the hardware
// concurrency.
unsigned default_thread_count();

// Draws `samples` application run times. Sample i is computed from its own
// random stream (seed, i), so the result does not depend on `options`.
// Per sample, draws happen in the order: non-iterative jobs by index,
// [dependent: the application mean], iterative jobs, overhead.
PredictiveSample sample_app(const FittedModel& model, ModelKind kind,
                            std::size_t samples, std::uint64_t seed,
                            const SamplingOptions& options = {});

// Closed-form moments of the sampled sum. The dependent variance exceeds the
// independent one by NI^2 * a_mean.scale^2 plus NI * (iter_scale_dep^2 -
// iter_pooled.scale^2).
double analytic_mean(const FittedModel& model, ModelKind kind);
double analytic_variance(const FittedModel& model, ModelKind kind);

// Linear interpolation between order statistics at position q * (n - 1).
double quantile(std::span<const double> values, double q);
std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> qs);
inline double quantile(const PredictiveSample& sample, double q) {
  return quantile(sample.values, q);
}

// Right-continuous step function: F(x) = #{v <= x} / n. `values` holds the
// distinct sorted values and `cum_fraction[i]` = F(values[i]).
struct Ecdf {
  std::vector<double> values;
  std::vector<double> cum_fraction;

  double operator()(double x) const;
};

Ecdf ecdf(std::span<const double> values);
inline Ecdf ecdf(const PredictiveSample& sample) { return ecdf(sample.values); }

// sup_x |F_a(x) - F_b(x)|. Throws ArgumentError if either side is empty.
double ks_distance(std::span<const double> a, std::span<const double> b);
inline double ks_distance(const PredictiveSample& a,
                          const PredictiveSample& b) {
  return ks_distance(a.values, b.values);
}

double sample_mean(std::span<const double> values);
// Divisor n - 1; 0 for a single value.
double sample_variance(std::span<const double> values);

// "value,cum_fraction" header plus one row per distinct value.
std::string format_ecdf_csv(const Ecdf& ecdf);
// One value per line, shortest round-trip decimal form.
std::string format_sample_lines(std::span<const double> values);
// Inverse of format_sample_lines; blank lines are ignored. Throws ParseError
// ("line N") on anything else that is not a finite number.
std::vector<double> parse_sample_lines(std::string_view text);

}  // namespace runtime_oracle
