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

#include "runtime_oracle/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "runtime_oracle/error.hpp"
#include "sampling.hpp"

namespace runtime_oracle {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Dependent ? "dependent" : "independent";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "independent") return ModelKind::Independent;
  if (text == "dependent") return ModelKind::Dependent;
  throw ArgumentError("model must be 'independent' or 'dependent', got '" +
                      std::string(text) + "'");
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("RUNTIME_ORACLE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

PredictiveSample sample_app(const FittedModel& model, ModelKind kind,
                            std::size_t samples, std::uint64_t seed,
                            const SamplingOptions& options) {
  if (samples == 0) throw ArgumentError("sample count must be at least 1");
  model.validate();

  std::vector<NormalParams> noniter;
  noniter.reserve(model.noniter.size());
  for (const auto& [index, params] : model.noniter) noniter.push_back(params);
  const std::size_t n_iter = model.n_iter_jobs;

  PredictiveSample out;
  out.model_kind = kind;
  detail::fill_samples(
      out, samples, seed, options.threads,
      [&](RandomStream& rng, detail::DrawCounter& count) {
        double total = 0.0;
        for (const auto& p : noniter) total += count(rng.normal(p.loc, p.scale));
        if (kind == ModelKind::Independent) {
          for (std::size_t i = 0; i < n_iter; ++i) {
            total += count(
                rng.normal(model.iter_pooled.loc, model.iter_pooled.scale));
          }
        } else {
          const double app = rng.normal(model.a_mean.loc, model.a_mean.scale);
          for (std::size_t i = 0; i < n_iter; ++i) {
            total += count(rng.normal(app, model.iter_scale_dep));
          }
        }
        total += count(rng.normal(model.overhead.loc, model.overhead.scale));
        return total;
      });
  return out;
}

double analytic_mean(const FittedModel& model, ModelKind kind) {
  double mean = model.overhead.loc;
  for (const auto& [index, p] : model.noniter) mean += p.loc;
  const double iter_loc = kind == ModelKind::Independent ? model.iter_pooled.loc
                                                         : model.a_mean.loc;
  return mean + static_cast<double>(model.n_iter_jobs) * iter_loc;
}

double analytic_variance(const FittedModel& model, ModelKind kind) {
  const double ni = static_cast<double>(model.n_iter_jobs);
  double var = model.overhead.variance();
  for (const auto& [index, p] : model.noniter) var += p.variance();
  if (kind == ModelKind::Independent) {
    return var + ni * model.iter_pooled.variance();
  }
  return var + ni * ni * model.a_mean.variance() +
         ni * model.iter_scale_dep * model.iter_scale_dep;
}

namespace {

double interpolate_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ArgumentError("quantile level must lie in [0, 1], got " +
                        std::to_string(q));
  }
}

}  // namespace

double quantile(std::span<const double> values, double q) {
  const double qs[] = {q};
  return quantiles(values, qs).front();
}

std::vector<double> quantiles(std::span<const double> values,
                              std::span<const double> qs) {
  if (values.empty()) throw ArgumentError("quantile of an empty sample");
  for (double q : qs) check_q(q);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) out.push_back(interpolate_sorted(sorted, q));
  return out;
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(values.begin(), values.end(), x);
  if (it == values.begin()) return 0.0;
  return cum_fraction[static_cast<std::size_t>(it - values.begin()) - 1];
}

Ecdf ecdf(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("ECDF of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  Ecdf out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.values.push_back(sorted[i]);
    out.cum_fraction.push_back(static_cast<double>(i + 1) / n);
  }
  return out;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw ArgumentError("KS distance needs two non-empty samples");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());

  // Walk the merged support; after consuming every value <= x on both sides
  // the counts give F_a(x) and F_b(x) exactly.
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
      x = sa[i];
    } else {
      x = sb[j];
    }
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    const double diff = std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb);
    sup = std::max(sup, diff);
  }
  return sup;
}

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean of an empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  const double mean = sample_mean(values);
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

std::string format_ecdf_csv(const Ecdf& ecdf) {
  std::string out = "value,cum_fraction\n";
  for (std::size_t i = 0; i < ecdf.values.size(); ++i) {
    out += detail::format_double(ecdf.values[i]);
    out += ',';
    out += detail::format_double(ecdf.cum_fraction[i]);
    out += '\n';
  }
  return out;
}

std::string format_sample_lines(std::span<const double> values) {
  std::string out;
  out.reserve(values.size() * 20);
  for (double v : values) {
    out += detail::format_double(v);
    out += '\n';
  }
  return out;
}

std::vector<double> parse_sample_lines(std::string_view text) {
  std::vector<double> values;
  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    double v = 0.0;
    const auto* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(line.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      throw ParseError("line " + std::to_string(line_number),
                       "not a number: '" + std::string(line) + "'");
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace runtime_oracle
