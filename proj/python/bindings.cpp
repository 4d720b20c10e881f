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


#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "runtime_oracle/error.hpp"
#include "runtime_oracle/estimation.hpp"
#include "runtime_oracle/online.hpp"
#include "runtime_oracle/predictor.hpp"
#include "runtime_oracle/spark_ingest.hpp"
#include "runtime_oracle/synthgen.hpp"
#include "runtime_oracle/trace.hpp"

namespace py = pybind11;
using namespace runtime_oracle;

namespace {

py::array_t<double> to_array(const std::vector<double>& values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

// Translators registered later are tried first, so bases come first.
void register_errors(py::module_& m) {
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", error.ptr());
  auto invariant =
      py::register_exception<InvariantError>(m, "InvariantError", error.ptr());
  py::register_exception<BoundsError>(m, "BoundsError", invariant.ptr());
  py::register_exception<StructureError>(m, "StructureError", invariant.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError",
                                                invariant.ptr());
  py::register_exception<SequenceError>(m, "SequenceError", invariant.ptr());
  auto parse = py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<IncompleteJobError>(m, "IncompleteJobError", parse.ptr());
  py::register_exception<LogStructureError>(m, "LogStructureError", parse.ptr());
  py::register_exception<EmptyInputError>(m, "EmptyInputError", error.ptr());
  py::register_exception<AggregateError>(m, "AggregateError", error.ptr());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Run-time distributions for iterative batch applications";
  register_errors(m);

  py::enum_<JobKind>(m, "JobKind")
      .value("ITERATIVE", JobKind::Iterative)
      .value("NON_ITERATIVE", JobKind::NonIterative);

  py::class_<JobRecord>(m, "JobRecord")
      .def(py::init([](std::size_t index, JobKind kind, double start_s, double end_s) {
             return JobRecord{index, kind, start_s, end_s};
           }),
           py::arg("index"), py::arg("kind"), py::arg("start_s"), py::arg("end_s"))
      .def_readwrite("index", &JobRecord::index)
      .def_readwrite("kind", &JobRecord::kind)
      .def_readwrite("start_s", &JobRecord::start_s)
      .def_readwrite("end_s", &JobRecord::end_s)
      .def_property_readonly("duration", &JobRecord::duration)
      .def(py::self == py::self);

  py::class_<ApplicationRun>(m, "ApplicationRun")
      .def(py::init([](std::string app_id, double wall_time_s,
                       std::vector<JobRecord> jobs) {
             return ApplicationRun{std::move(app_id), wall_time_s, std::move(jobs)};
           }),
           py::arg("app_id"), py::arg("wall_time_s"), py::arg("jobs"))
      .def_readwrite("app_id", &ApplicationRun::app_id)
      .def_readwrite("wall_time_s", &ApplicationRun::wall_time_s)
      .def_readwrite("jobs", &ApplicationRun::jobs)
      .def_property_readonly("job_time_sum", &ApplicationRun::job_time_sum)
      .def_property_readonly("overhead", &ApplicationRun::overhead)
      .def_property_readonly("iterative_count", &ApplicationRun::iterative_count)
      .def(py::self == py::self);

  py::class_<IterativeWindow>(m, "IterativeWindow")
      .def(py::init([](std::size_t first, std::size_t last) {
             return IterativeWindow{first, last};
           }),
           py::arg("first"), py::arg("last"))
      .def_readwrite("first", &IterativeWindow::first)
      .def_readwrite("last", &IterativeWindow::last)
      .def_property_readonly("width", &IterativeWindow::width)
      .def("contains", &IterativeWindow::contains)
      .def(py::self == py::self);

  py::enum_<RunFlagReason>(m, "RunFlagReason")
      .value("NEGATIVE_OVERHEAD", RunFlagReason::NegativeOverhead)
      .value("JOB_COUNT_MISMATCH", RunFlagReason::JobCountMismatch);

  py::class_<RunFlag>(m, "RunFlag")
      .def_readonly("run", &RunFlag::run)
      .def_readonly("reason", &RunFlag::reason);

  py::class_<TraceSet>(m, "TraceSet")
      .def(py::init([](std::vector<ApplicationRun> runs,
                       std::optional<IterativeWindow> window) {
             TraceSet t{std::move(runs), window, {}};
             audit(t);
             return t;
           }),
           py::arg("runs"), py::arg("iterative_window") = std::nullopt)
      .def_readonly("runs", &TraceSet::runs)
      .def_readonly("iterative_window", &TraceSet::iterative_window)
      .def_readonly("flags", &TraceSet::flags)
      .def(py::self == py::self);

  m.def("parse_window", &parse_window, py::arg("text"));
  m.def("classify_jobs", &classify_jobs, py::arg("run"), py::arg("window"));
  m.def("serialize_traces", &serialize_traces, py::arg("traces"));
  m.def("parse_traces", &parse_traces, py::arg("text"));

  m.def(
      "parse_event_log_file",
      [](const std::filesystem::path& path, bool job_span) {
        return parse_event_log_file(
            path, {job_span ? WallClock::JobSpan : WallClock::Application});
      },
      py::arg("path"), py::arg("job_span") = false);
  m.def(
      "ingest_directory",
      [](std::vector<std::filesystem::path> paths, IterativeWindow window,
         bool job_span) {
        return ingest_directory(std::move(paths), window,
                                {job_span ? WallClock::JobSpan : WallClock::Application});
      },
      py::arg("paths"), py::arg("window"), py::arg("job_span") = false);

  py::class_<NormalParams>(m, "NormalParams")
      .def(py::init([](double loc, double scale) { return NormalParams{loc, scale}; }),
           py::arg("loc"), py::arg("scale"))
      .def_readwrite("loc", &NormalParams::loc)
      .def_readwrite("scale", &NormalParams::scale)
      .def_property_readonly("variance", &NormalParams::variance)
      .def(py::self == py::self)
      .def("__repr__", [](const NormalParams& p) {
        return "NormalParams(loc=" + py::repr(py::float_(p.loc)).cast<std::string>() +
               ", scale=" + py::repr(py::float_(p.scale)).cast<std::string>() + ")";
      });

  py::class_<FittedModel>(m, "FittedModel")
      .def(py::init<>())
      .def_readwrite("noniter", &FittedModel::noniter)
      .def_readwrite("iter_pooled", &FittedModel::iter_pooled)
      .def_readwrite("a_mean", &FittedModel::a_mean)
      .def_readwrite("iter_scale_dep", &FittedModel::iter_scale_dep)
      .def_readwrite("overhead", &FittedModel::overhead)
      .def_readwrite("n_iter_jobs", &FittedModel::n_iter_jobs)
      .def_readwrite("n_runs", &FittedModel::n_runs)
      .def_property_readonly("job_count", &FittedModel::job_count)
      .def("job_kinds", &FittedModel::job_kinds)
      .def("validate", &FittedModel::validate)
      .def(py::self == py::self);

  m.def(
      "fit",
      [](const TraceSet& traces, bool within_app_scale, const std::string& overhead) {
        FitOptions options;
        options.iter_scale =
            within_app_scale ? IterScale::WithinApplication : IterScale::Pooled;
        options.overhead = parse_overhead_mode(overhead);
        auto result = fit(traces, options);
        return py::make_tuple(std::move(result.model), std::move(result.warnings));
      },
      py::arg("traces"), py::arg("within_app_scale") = false,
      py::arg("overhead") = "fitted",
      "Returns (model, warnings).");
  m.def("with_zero_overhead", &with_zero_overhead, py::arg("model"));
  m.def("serialize_model", &serialize_model, py::arg("model"));
  m.def("parse_model", &parse_model, py::arg("text"));

  py::enum_<ModelKind>(m, "ModelKind")
      .value("INDEPENDENT", ModelKind::Independent)
      .value("DEPENDENT", ModelKind::Dependent);

  m.attr("DEFAULT_SAMPLES") = kDefaultSamples;
  m.def(
      "sample_app",
      [](const FittedModel& model, ModelKind kind, std::size_t samples,
         std::uint64_t seed, unsigned threads) {
        std::vector<double> values;
        {
          py::gil_scoped_release release;
          values = sample_app(model, kind, samples, seed, {threads}).values;
        }
        return to_array(values);
      },
      py::arg("model"), py::arg("kind"), py::arg("samples") = kDefaultSamples,
      py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("analytic_mean", &analytic_mean, py::arg("model"), py::arg("kind"));
  m.def("analytic_variance", &analytic_variance, py::arg("model"), py::arg("kind"));
  m.def(
      "quantile",
      [](const std::vector<double>& values, double q) { return quantile(values, q); },
      py::arg("values"), py::arg("q"));
  m.def(
      "ecdf",
      [](const std::vector<double>& values) {
        auto e = ecdf(values);
        return py::make_tuple(to_array(e.values), to_array(e.cum_fraction));
      },
      py::arg("values"), "Returns (distinct sorted values, cumulative fractions).");
  m.def(
      "ks_distance",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return ks_distance(a, b);
      },
      py::arg("a"), py::arg("b"));

  py::enum_<Variant>(m, "Variant")
      .value("FIXED_A_MEAN", Variant::FixedAMean)
      .value("ADAPTIVE_A_MEAN", Variant::AdaptiveAMean);

  py::class_<OnlineState>(m, "OnlineState")
      .def(py::init<FittedModel, Variant>(), py::arg("model"),
           py::arg("variant") = Variant::FixedAMean)
      .def_property_readonly("finished_sum", &OnlineState::finished_sum)
      .def_property_readonly("remaining_noniter", &OnlineState::remaining_noniter)
      .def_property_readonly("remaining_iter_count", &OnlineState::remaining_iter_count)
      .def_property_readonly("working_a_mean", &OnlineState::working_a_mean)
      .def_property_readonly("next_index", &OnlineState::next_index)
      .def_property_readonly("complete", &OnlineState::complete)
      .def("advance", &OnlineState::advance, py::arg("job"));
  m.def(
      "advance",
      [](const OnlineState& state, const JobRecord& job) { return advance(state, job); },
      py::arg("state"), py::arg("job"));
  m.def(
      "predict_total",
      [](const OnlineState& state, std::size_t samples, std::uint64_t seed,
         ModelKind structure) {
        std::vector<double> values;
        {
          py::gil_scoped_release release;
          values = predict_total(state, samples, seed, {structure, 0}).values;
        }
        return to_array(values);
      },
      py::arg("state"), py::arg("samples") = kDefaultSamples, py::arg("seed") = 0,
      py::arg("structure") = ModelKind::Dependent);
  m.def("predictive_mean", &predictive_mean, py::arg("state"),
        py::arg("structure") = ModelKind::Dependent);
  m.def("predictive_variance", &predictive_variance, py::arg("state"),
        py::arg("structure") = ModelKind::Dependent);

  py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
      .def_readonly("after_job_index", &TrajectoryPoint::after_job_index)
      .def_readonly("p10", &TrajectoryPoint::p10)
      .def_readonly("p20", &TrajectoryPoint::p20)
      .def_readonly("p50", &TrajectoryPoint::p50)
      .def_readonly("p80", &TrajectoryPoint::p80)
      .def_readonly("p90", &TrajectoryPoint::p90);
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("points", &Trajectory::points)
      .def_readonly("actual_total", &Trajectory::actual_total);
  m.def(
      "run_trajectory",
      [](const FittedModel& model, const ApplicationRun& run, Variant variant,
         std::size_t samples, std::uint64_t seed, ModelKind structure) {
        return run_trajectory(model, run, variant, samples, seed, {structure, 0});
      },
      py::arg("model"), py::arg("run"), py::arg("variant") = Variant::FixedAMean,
      py::arg("samples") = kDefaultSamples, py::arg("seed") = 0,
      py::arg("structure") = ModelKind::Dependent);
  m.def("format_trajectory_csv", &format_trajectory_csv, py::arg("trajectory"));

  py::class_<GcContamination>(m, "GcContamination")
      .def(py::init([](double probability, NormalParams delay) {
             return GcContamination{probability, delay};
           }),
           py::arg("probability"), py::arg("delay"))
      .def_readwrite("probability", &GcContamination::probability)
      .def_readwrite("delay", &GcContamination::delay);

  py::class_<GeneratorSpec>(m, "GeneratorSpec")
      .def(py::init<>())
      .def_readwrite("n_runs", &GeneratorSpec::n_runs)
      .def_readwrite("noniter", &GeneratorSpec::noniter)
      .def_readwrite("leading_noniter", &GeneratorSpec::leading_noniter)
      .def_readwrite("n_iter", &GeneratorSpec::n_iter)
      .def_readwrite("iter_base", &GeneratorSpec::iter_base)
      .def_readwrite("app_offset_scale", &GeneratorSpec::app_offset_scale)
      .def_readwrite("overhead_true", &GeneratorSpec::overhead_true)
      .def_readwrite("gc", &GeneratorSpec::gc)
      .def_readwrite("seed", &GeneratorSpec::seed)
      .def_readwrite("duration_floor", &GeneratorSpec::duration_floor)
      .def_property_readonly("window", &GeneratorSpec::window)
      .def("validate", &GeneratorSpec::validate);

  py::class_<RunTruth>(m, "RunTruth")
      .def_readonly("offset", &RunTruth::offset)
      .def_readonly("gc_hit", &RunTruth::gc_hit)
      .def_readonly("gc_delay", &RunTruth::gc_delay);
  py::class_<GeneratedTraces>(m, "GeneratedTraces")
      .def_readonly("traces", &GeneratedTraces::traces)
      .def_readonly("spec", &GeneratedTraces::spec)
      .def_readonly("truth", &GeneratedTraces::truth);
  m.def("generate", &generate, py::arg("spec"));
  m.def("serialize_spec", &serialize_spec, py::arg("spec"));
  m.def("parse_spec", &parse_spec, py::arg("text"));
}
