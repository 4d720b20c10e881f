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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "runtime_oracle/error.hpp"
#include "runtime_oracle/online.hpp"
#include "runtime_oracle/synthgen.hpp"
#include "test_support.hpp"

namespace runtime_oracle {
namespace {

using testing::serial_run;

FittedModel example_model() { return fit(testing::estimation_example()).model; }

JobRecord job(std::size_t index, JobKind kind, double duration) {
  return {index, kind, 0.0, duration};
}

constexpr auto kNon = JobKind::NonIterative;
constexpr auto kIter = JobKind::Iterative;

TEST(Advance, AdaptiveRecentersOnIterativeMean) {
  OnlineState s(example_model(), Variant::AdaptiveAMean);
  EXPECT_NEAR(s.working_a_mean().loc, 4.0, 1e-12);
  s = s.advance(job(0, kNon, 2.0));
  EXPECT_NEAR(s.working_a_mean().loc, 4.0, 1e-12) << "non-iterative job moved it";
  s = s.advance(job(1, kIter, 5.0));
  EXPECT_EQ(s.working_a_mean().loc, 5.0);
  EXPECT_NEAR(s.working_a_mean().scale, 1.4142135623730951, 1e-12);
  s = s.advance(job(2, kIter, 3.0));
  EXPECT_EQ(s.working_a_mean().loc, 4.0);
  EXPECT_TRUE(s.complete());
}

TEST(Advance, FixedNeverMovesAMean) {
  const auto m = example_model();
  OnlineState s(m, Variant::FixedAMean);
  for (const auto& j : {job(0, kNon, 9.0), job(1, kIter, 50.0)}) {
    s = advance(s, j);
    EXPECT_EQ(s.working_a_mean(), m.a_mean);
  }
}

TEST(Advance, TracksRemainingJobs) {
  OnlineState s(example_model(), Variant::FixedAMean);
  EXPECT_EQ(s.remaining_noniter(), std::vector<std::size_t>{0});
  EXPECT_EQ(s.remaining_iter_count(), 2u);
  const auto next = s.advance(job(0, kNon, 1.0));
  EXPECT_TRUE(next.remaining_noniter().empty());
  EXPECT_EQ(next.finished().size(), 1u);
  EXPECT_EQ(s.finished().size(), 0u) << "advance mutated its input";
}

TEST(Advance, SequenceErrors) {
  OnlineState s(example_model(), Variant::FixedAMean);
  EXPECT_THROW(s.advance(job(1, kIter, 1.0)), SequenceError);
  s = s.advance(job(0, kNon, 1.0));
  EXPECT_THROW(s.advance(job(0, kNon, 1.0)), SequenceError);
  EXPECT_THROW(s.advance(job(1, kNon, 1.0)), StructureError);
  EXPECT_THROW(s.advance(job(1, kIter, -1.0)), InvariantError);
  s = s.advance(job(1, kIter, 1.0)).advance(job(2, kIter, 1.0));
  EXPECT_THROW(s.advance(job(3, kIter, 1.0)), SequenceError);
}

TEST(PredictTotal, AllFinishedIsConstant) {
  const auto m = with_zero_overhead(example_model());
  auto s = OnlineState(m, Variant::FixedAMean)
               .advance(job(0, kNon, 2.5))
               .advance(job(1, kIter, 4.0))
               .advance(job(2, kIter, 6.0));
  const auto sample = predict_total(s, 1000, 7);
  for (double v : sample.values) EXPECT_EQ(v, 12.5);
  EXPECT_EQ(predictive_variance(s), 0.0);
  EXPECT_THROW(predict_total(s, 0, 7), ArgumentError);
}

TEST(PredictTotal, RemainingVarianceOneIterativeLeft) {
  auto s = OnlineState(example_model(), Variant::FixedAMean)
               .advance(job(0, kNon, 2.0))
               .advance(job(1, kIter, 4.0));
  // 1^2 * 2 + 1 * 8/3 plus a zero-scale overhead.
  EXPECT_NEAR(predictive_variance(s), 14.0 / 3.0, 1e-12);
  const auto sample = predict_total(s, 100000, 21);
  EXPECT_NEAR(sample_variance(sample.values) / (14.0 / 3.0), 1.0, 0.05);
}

TEST(PredictTotal, RemainingVarianceNoIterativeFinished) {
  OnlineState start(example_model(), Variant::FixedAMean);
  EXPECT_NEAR(predictive_variance(start), 46.0 / 3.0, 1e-12);
  EXPECT_NEAR(sample_variance(predict_total(start, 100000, 4).values) /
                  (46.0 / 3.0),
              1.0, 0.05);
  const auto after_noniter = start.advance(job(0, kNon, 2.0));
  EXPECT_NEAR(predictive_variance(after_noniter), 40.0 / 3.0, 1e-12);
  EXPECT_NEAR(sample_variance(predict_total(after_noniter, 100000, 4).values) /
                  (40.0 / 3.0),
              1.0, 0.05);
  EXPECT_LT(predictive_variance(after_noniter), predictive_variance(start));
}

TEST(PredictTotal, IndependentStructure) {
  OnlineState start(example_model(), Variant::AdaptiveAMean);
  auto s = start.advance(job(0, kNon, 2.0)).advance(job(1, kIter, 9.0));
  OnlineOptions options;
  options.structure = ModelKind::Independent;
  EXPECT_NEAR(predictive_variance(s, ModelKind::Independent), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(predictive_mean(s, ModelKind::Independent), 2.0 + 9.0 + 4.0 + 1.0,
              1e-12);
  const auto sample = predict_total(s, 50000, 3, options);
  EXPECT_NEAR(sample_mean(sample.values), 16.0, 0.05);
}

TEST(PredictTotal, DeterministicAcrossThreads) {
  OnlineState s(example_model(), Variant::AdaptiveAMean);
  OnlineOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(predict_total(s, 9000, 12, one).values,
            predict_total(s, 9000, 12, four).values);
}

// Property: analytic variance under FixedAMean strictly drops with every job
// that carries a positive-scale term, and the predicted mean never falls
// below the elapsed job time when remaining locations are non-negative.
TEST(Online, VarianceMonotoneAndMeanAboveElapsed) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto spec = testing::kmeans_like_spec(500 + trial);
    spec.n_runs = 30;
    spec.app_offset_scale = 0.5;
    const auto generated = generate(spec);
    const auto m = fit(generated.traces).model;
    const auto& run = generated.traces.runs[gen() % spec.n_runs];
    OnlineState s(m, Variant::FixedAMean);
    double prev = predictive_variance(s);
    for (const auto& j : run.jobs) {
      s = s.advance(j);
      const double var = predictive_variance(s);
      EXPECT_LT(var, prev) << "job " << j.index;
      EXPECT_GE(predictive_mean(s), s.finished_sum());
      prev = var;
    }
  }
}

TEST(Online, PredictedMeanNonDecreasingInObservedDuration) {
  for (auto variant : {Variant::FixedAMean, Variant::AdaptiveAMean}) {
    const OnlineState s0(example_model(), variant);
    const auto s1 = s0.advance(job(0, kNon, 2.0));
    double prev = -1.0;
    for (double d : {0.0, 0.5, 3.0, 4.0, 10.0}) {
      const double mean = predictive_mean(s1.advance(job(1, kIter, d)));
      EXPECT_GE(mean, prev);
      prev = mean;
    }
  }
}

TEST(Online, AdaptiveEqualsFixedWhenObservationsHitTheMean) {
  const auto m = example_model();
  const auto run = serial_run("on-mean", {2.0, m.a_mean.loc, m.a_mean.loc},
                              {1, 2}, 1.0);
  const auto fixed = run_trajectory(m, run, Variant::FixedAMean, 4000, 5);
  const auto adaptive = run_trajectory(m, run, Variant::AdaptiveAMean, 4000, 5);
  ASSERT_EQ(fixed.points.size(), adaptive.points.size());
  for (std::size_t i = 0; i < fixed.points.size(); ++i) {
    EXPECT_EQ(fixed.points[i].p50, adaptive.points[i].p50);
    EXPECT_EQ(fixed.points[i].p10, adaptive.points[i].p10);
    EXPECT_EQ(fixed.points[i].p90, adaptive.points[i].p90);
  }
}

TEST(Trajectory, ShapeAndFinalPoint) {
  const auto m = with_zero_overhead(example_model());
  const auto run = serial_run("r", {1.5, 3.0, 5.0}, {1, 2}, 0.75);
  const auto t = run_trajectory(m, run, Variant::FixedAMean, 2000, 1);
  ASSERT_EQ(t.points.size(), 4u);
  EXPECT_EQ(t.points[0].after_job_index, -1);
  EXPECT_EQ(t.points[3].after_job_index, 2);
  EXPECT_EQ(t.actual_total, 9.5);
  const auto& last = t.points.back();
  for (double p : {last.p10, last.p20, last.p50, last.p80, last.p90}) {
    EXPECT_EQ(p, 9.5);
  }
  for (const auto& p : t.points) {
    EXPECT_LE(p.p10, p.p20);
    EXPECT_LE(p.p20, p.p50);
    EXPECT_LE(p.p50, p.p80);
    EXPECT_LE(p.p80, p.p90);
  }
}

TEST(Trajectory, ActualTotalIncludesOverheadWhenModeled) {
  const auto run = serial_run("r", {1.5, 3.0, 5.0}, {1, 2}, 0.75);
  const auto t = run_trajectory(example_model(), run, Variant::FixedAMean, 100, 1);
  EXPECT_EQ(t.actual_total, 10.25);
}

TEST(Trajectory, ZeroVarianceModelIsExactEverywhere) {
  TraceSet traces;
  traces.runs.push_back(serial_run("a", {1.0, 2.0, 2.0, 0.5}, {1, 2}, 0.0));
  traces.runs.push_back(serial_run("b", {1.0, 2.0, 2.0, 0.5}, {1, 2}, 0.0));
  const auto m = fit(traces).model;
  for (auto variant : {Variant::FixedAMean, Variant::AdaptiveAMean}) {
    const auto t = run_trajectory(m, traces.runs[0], variant, 500, 2);
    EXPECT_EQ(t.actual_total, 5.5);
    for (const auto& p : t.points) {
      for (double v : {p.p10, p.p20, p.p50, p.p80, p.p90}) EXPECT_EQ(v, 5.5);
    }
  }
}

TEST(Trajectory, StructureMismatch) {
  const auto m = example_model();
  EXPECT_THROW(run_trajectory(m, serial_run("short", {1.0, 2.0}, {1, 1}, 0.0),
                              Variant::FixedAMean, 10, 1),
               StructureError);
  EXPECT_THROW(run_trajectory(m, serial_run("shifted", {1.0, 2.0, 3.0}, {0, 1}, 0.0),
                              Variant::FixedAMean, 10, 1),
               StructureError);
}

TEST(Trajectory, AdaptiveTracksAHighOffsetRun) {
  auto spec = testing::kmeans_like_spec(8);
  spec.app_offset_scale = 1.0;
  const auto m = fit(generate(spec).traces).model;
  auto slow = spec;
  slow.n_runs = 1;
  slow.seed = 9;
  slow.app_offset_scale = 0.0;
  slow.iter_base.loc += 2.0 * m.a_mean.scale;
  const auto run = generate(slow).traces.runs[0];
  const auto fixed = run_trajectory(m, run, Variant::FixedAMean, 5000, 3);
  const auto adaptive = run_trajectory(m, run, Variant::AdaptiveAMean, 5000, 3);
  const std::size_t step = spec.leading() + 1;  // after job 7
  EXPECT_LT(std::abs(adaptive.points[step].p50 - adaptive.actual_total),
            std::abs(fixed.points[step].p50 - fixed.actual_total));
}

TEST(Trajectory, CsvFormat) {
  const auto m = with_zero_overhead(example_model());
  const auto run = serial_run("r", {1.0, 4.0, 4.0}, {1, 2}, 0.0);
  const auto csv =
      format_trajectory_csv(run_trajectory(m, run, Variant::FixedAMean, 50, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "after_job_index,p10,p20,p50,p80,p90,actual_total");
  EXPECT_NE(csv.find("\n2,9,9,9,9,9,9\n"), std::string::npos) << csv;
}

TEST(VariantNames, ParseAndPrint) {
  EXPECT_EQ(parse_variant("adaptive"), Variant::AdaptiveAMean);
  EXPECT_EQ(to_string(Variant::FixedAMean), "fixed");
  EXPECT_THROW(parse_variant("bayes"), ArgumentError);
}

}  // namespace
}  // namespace runtime_oracle
