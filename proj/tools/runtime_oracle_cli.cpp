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

// runtime-oracle: ingest, fit, predict, online, synth, compare.
//
// Exit codes: 0 success, 1 usage error, 2 missing input, 3 parse failure,
// 4 invariant violation.

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "runtime_oracle/error.hpp"
#include "runtime_oracle/estimation.hpp"
#include "runtime_oracle/online.hpp"
#include "runtime_oracle/predictor.hpp"
#include "runtime_oracle/spark_ingest.hpp"
#include "runtime_oracle/synthgen.hpp"
#include "runtime_oracle/trace.hpp"

namespace fs = std::filesystem;
namespace ro = runtime_oracle;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kMissing = 2, kParse = 3, kInvariant = 4 };

class MissingInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string actual;
  std::string run_file;
  std::string window;
  std::string model_kind = "dependent";
  std::string variant = "fixed";
  std::string overhead = "fitted";
  std::size_t samples = ro::kDefaultSamples;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> runs_override;
  std::size_t run_index = 0;
  bool longest = false;
  bool job_span = false;
  bool within_app_scale = false;
  bool svg = false;
  unsigned threads = 0;
};

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::stderr_logger_st("runtime-oracle");
  logger->set_pattern("%n: %l: %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RUNTIME_ORACLE_LOG")) {
    const std::string level = env;
    if (level == "error") logger->set_level(spdlog::level::err);
    if (level == "warn") logger->set_level(spdlog::level::warn);
    if (level == "info") logger->set_level(spdlog::level::info);
    if (level == "debug") logger->set_level(spdlog::level::debug);
  }
  return logger;
}

std::string fmt_num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const fs::path& require_file(const fs::path& path) {
  if (!fs::exists(path)) throw MissingInput("no such file: " + path.string());
  return path;
}

std::string read_all(const fs::path& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs `parse` over the file's text; parse errors get the file name prepended.
template <typename Parse>
auto parse_file(const fs::path& path, Parse parse) {
  const std::string text = read_all(path);
  try {
    return parse(text);
  } catch (const ro::ParseError& e) {
    throw ro::ParseError(path.string() + (e.path().empty() ? "" : ":" + e.path()),
                         e.what());
  }
}

// Writes through a temporary file in the same directory, then renames.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

ro::FittedModel load_model(const RunConfig& cfg) {
  auto model = parse_file(cfg.inputs.at(0), [](const std::string& t) {
    return ro::parse_model(t);
  });
  if (ro::parse_overhead_mode(cfg.overhead) == ro::OverheadMode::Zero) {
    model = ro::with_zero_overhead(std::move(model));
  }
  return model;
}

ro::TraceSet load_traces(const fs::path& path) {
  return parse_file(path, [](const std::string& t) { return ro::parse_traces(t); });
}

// ---------------------------------------------------------------------------

int cmd_ingest(const RunConfig& cfg, spdlog::logger& log) {
  const auto window = ro::parse_window(cfg.window);
  std::vector<fs::path> paths;
  for (const auto& in : cfg.inputs) paths.push_back(require_file(in));
  ro::IngestOptions options;
  if (cfg.job_span) options.wall_clock = ro::WallClock::JobSpan;
  const auto traces = ro::ingest_directory(paths, window, options);
  for (const auto& flag : traces.flags) {
    log.warn("run '{}' flagged: {}", traces.runs[flag.run].app_id,
             ro::to_string(flag.reason));
  }
  write_atomic(cfg.output, ro::serialize_traces(traces));
  log.info("wrote {} runs to {}", traces.runs.size(), cfg.output);
  std::cout << "ingested " << traces.runs.size() << " runs ("
            << traces.flags.size() << " flagged)\n";
  return kOk;
}

int cmd_fit(const RunConfig& cfg, spdlog::logger& log) {
  const auto traces = load_traces(cfg.inputs.at(0));
  ro::FitOptions options;
  options.overhead = ro::parse_overhead_mode(cfg.overhead);
  if (cfg.within_app_scale) options.iter_scale = ro::IterScale::WithinApplication;
  const auto result = ro::fit(traces, options);
  for (const auto& w : result.warnings) log.warn("{}", w);
  const auto& m = result.model;
  write_atomic(cfg.output, ro::serialize_model(m));

  auto row = [](const std::string& name, const ro::NormalParams& p) {
    std::cout << "  " << name << " loc=" << fmt_num(p.loc)
              << " scale=" << fmt_num(p.scale) << "\n";
  };
  std::cout << "n_runs=" << m.n_runs << " n_iter_jobs=" << m.n_iter_jobs << "\n";
  for (const auto& [index, p] : m.noniter) {
    row("noniter[" + std::to_string(index) + "]", p);
  }
  row("iter_pooled", m.iter_pooled);
  row("a_mean", m.a_mean);
  std::cout << "  iter_scale_dep=" << fmt_num(m.iter_scale_dep) << "\n";
  row("overhead", m.overhead);
  return kOk;
}

int cmd_predict(const RunConfig& cfg, spdlog::logger& log) {
  const auto model = load_model(cfg);
  const auto kind = ro::parse_model_kind(cfg.model_kind);
  const auto sample =
      ro::sample_app(model, kind, cfg.samples, cfg.seed, {cfg.threads});
  if (sample.negative_draws > 0) {
    log.info("{} negative component draws kept in the sums",
             sample.negative_draws);
  }
  write_atomic(with_suffix(cfg.output, ".samples.txt"),
               ro::format_sample_lines(sample.values));
  write_atomic(with_suffix(cfg.output, ".ecdf.csv"),
               ro::format_ecdf_csv(ro::ecdf(sample)));
  const double qs[] = {0.5, 0.01, 0.99};
  const auto q = ro::quantiles(sample.values, qs);
  std::ostringstream summary;
  summary << "model=" << ro::to_string(kind) << " samples=" << cfg.samples
          << " seed=" << cfg.seed << "\n"
          << "median=" << fmt_num(q[0]) << " p1=" << fmt_num(q[1])
          << " p99=" << fmt_num(q[2]) << "\n"
          << "mean=" << fmt_num(ro::sample_mean(sample.values))
          << " std=" << fmt_num(std::sqrt(ro::sample_variance(sample.values)))
          << "\n";
  write_atomic(with_suffix(cfg.output, ".summary.txt"), summary.str());
  std::cout << summary.str();
  return kOk;
}

int cmd_online(const RunConfig& cfg, spdlog::logger& log) {
  const auto model = load_model(cfg);
  auto traces = load_traces(cfg.run_file);
  if (traces.runs.empty()) {
    throw ro::InvariantError(cfg.run_file + " contains no runs");
  }
  std::size_t pick = cfg.run_index;
  if (cfg.longest) {
    pick = static_cast<std::size_t>(
        std::max_element(traces.runs.begin(), traces.runs.end(),
                         [](const auto& a, const auto& b) {
                           return a.wall_time_s < b.wall_time_s;
                         }) -
        traces.runs.begin());
  }
  if (pick >= traces.runs.size()) {
    throw ro::BoundsError("run index " + std::to_string(pick) +
                              " out of range for " +
                              std::to_string(traces.runs.size()) + " runs",
                          static_cast<long long>(pick));
  }
  auto run = traces.runs[pick];
  if (!cfg.window.empty()) run = ro::classify_jobs(run, ro::parse_window(cfg.window));
  log.info("replaying run '{}'", run.app_id);
  ro::OnlineOptions options;
  options.structure = ro::parse_model_kind(cfg.model_kind);
  options.threads = cfg.threads;
  const auto trajectory =
      ro::run_trajectory(model, run, ro::parse_variant(cfg.variant),
                         cfg.samples, cfg.seed, options);
  write_atomic(cfg.output, ro::format_trajectory_csv(trajectory));
  const auto& first = trajectory.points.front();
  std::cout << "run=" << run.app_id << " actual_total="
            << fmt_num(trajectory.actual_total) << " prior_p50="
            << fmt_num(first.p50) << " steps=" << trajectory.points.size()
            << "\n";
  return kOk;
}

int cmd_synth(const RunConfig& cfg, spdlog::logger& log) {
  auto spec = parse_file(cfg.inputs.at(0),
                         [](const std::string& t) { return ro::parse_spec(t); });
  if (cfg.seed_override) spec.seed = *cfg.seed_override;
  if (cfg.runs_override) spec.n_runs = *cfg.runs_override;
  const auto generated = ro::generate(spec);
  write_atomic(with_suffix(cfg.output, ".traces.json"),
               ro::serialize_traces(generated.traces));
  write_atomic(with_suffix(cfg.output, ".truth.json"),
               ro::serialize_truth(generated));
  log.info("generated {} runs with seed {}", spec.n_runs, spec.seed);
  std::cout << "generated " << spec.n_runs << " runs\n";
  return kOk;
}

// Either a canonical trace document (run wall times) or a samples file.
std::vector<double> load_actual(const RunConfig& cfg) {
  const fs::path path = cfg.actual;
  const std::string text = read_all(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const auto traces = load_traces(path);
    const bool zero = ro::parse_overhead_mode(cfg.overhead) == ro::OverheadMode::Zero;
    std::vector<double> values;
    for (const auto& run : traces.runs) {
      values.push_back(zero ? run.job_time_sum() : run.wall_time_s);
    }
    return values;
  }
  return parse_file(path, [](const std::string& t) {
    return ro::parse_sample_lines(t);
  });
}

std::string svg_overlay(const ro::Ecdf& predicted, const ro::Ecdf& actual) {
  constexpr double kW = 640, kH = 400, kPad = 50;
  const double lo = std::min(predicted.values.front(), actual.values.front());
  double hi = std::max(predicted.values.back(), actual.values.back());
  if (hi <= lo) hi = lo + 1.0;
  auto px = [&](double x) { return kPad + (x - lo) / (hi - lo) * (kW - 2 * kPad); };
  auto py = [&](double f) { return kH - kPad - f * (kH - 2 * kPad); };
  auto polyline = [&](const ro::Ecdf& e, const char* color) {
    std::string pts = fmt_num(px(e.values.front())) + "," + fmt_num(py(0.0));
    const std::size_t stride = std::max<std::size_t>(1, e.values.size() / 500);
    for (std::size_t i = 0; i < e.values.size(); i += stride) {
      const std::size_t j = std::min(i + stride - 1, e.values.size() - 1);
      pts += " " + fmt_num(px(e.values[j])) + "," +
             fmt_num(py(i == 0 ? 0.0 : e.cum_fraction[i - 1]));
      pts += " " + fmt_num(px(e.values[j])) + "," + fmt_num(py(e.cum_fraction[j]));
    }
    return std::string("<polyline fill=\"none\" stroke=\"") + color +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  };
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
  out += "<line x1=\"50\" y1=\"350\" x2=\"590\" y2=\"350\" stroke=\"black\"/>\n";
  out += "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"350\" stroke=\"black\"/>\n";
  out += "<text x=\"50\" y=\"370\" font-size=\"11\">" + fmt_num(lo) + " s</text>\n";
  out += "<text x=\"590\" y=\"370\" font-size=\"11\" text-anchor=\"end\">" +
         fmt_num(hi) + " s</text>\n";
  out += "<text x=\"45\" y=\"54\" font-size=\"11\" text-anchor=\"end\">1</text>\n";
  out += "<text x=\"45\" y=\"354\" font-size=\"11\" text-anchor=\"end\">0</text>\n";
  out += polyline(actual, "black");
  out += polyline(predicted, "steelblue");
  out += "<text x=\"420\" y=\"300\" font-size=\"12\" fill=\"black\">actual</text>\n";
  out += "<text x=\"420\" y=\"316\" font-size=\"12\" fill=\"steelblue\">predicted</text>\n";
  out += "</svg>\n";
  return out;
}

int cmd_compare(const RunConfig& cfg, spdlog::logger& log) {
  const auto predicted = parse_file(cfg.inputs.at(0), [](const std::string& t) {
    return ro::parse_sample_lines(t);
  });
  const auto actual = load_actual(cfg);
  if (predicted.empty() || actual.empty()) {
    throw ro::InvariantError("compare needs non-empty predicted and actual sets");
  }
  const double ks = ro::ks_distance(predicted, actual);
  const auto e_pred = ro::ecdf(predicted);
  const auto e_act = ro::ecdf(actual);
  write_atomic(with_suffix(cfg.output, ".predicted.ecdf.csv"),
               ro::format_ecdf_csv(e_pred));
  write_atomic(with_suffix(cfg.output, ".actual.ecdf.csv"),
               ro::format_ecdf_csv(e_act));
  write_atomic(with_suffix(cfg.output, ".ks.txt"), fmt_num(ks) + "\n");
  if (cfg.svg) write_atomic(with_suffix(cfg.output, ".svg"), svg_overlay(e_pred, e_act));
  log.info("compared {} predicted values against {} actual", predicted.size(),
           actual.size());
  std::cout << "ks_distance=" << fmt_num(ks) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto log = make_logger();
  RunConfig cfg;

  CLI::App app{"Run-time models for iterative big-data applications"};
  app.require_subcommand(1);
  app.add_option("--threads", cfg.threads,
                 "Sampling threads (default: RUNTIME_ORACLE_THREADS or all cores)");

  auto add_output = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--output", cfg.output, what)->required();
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
  };
  auto add_overhead = [&](CLI::App* sub) {
    sub->add_option("--overhead", cfg.overhead, "Overhead term")
        ->check(CLI::IsMember({"fitted", "zero"}));
  };
  const auto kinds = CLI::IsMember({"independent", "dependent"});

  auto* ingest = app.add_subcommand("ingest", "Spark event logs -> trace file");
  ingest->add_option("--input", cfg.inputs, "Event-log files or directories")
      ->required();
  ingest->add_option("--window", cfg.window, "Iterative jobs FIRST:LAST")->required();
  ingest->add_flag("--job-span", cfg.job_span,
                   "Measure wall time from first job to last job");
  add_output(ingest, "Trace file");

  auto* fitcmd = app.add_subcommand("fit", "Trace file -> model file");
  fitcmd->add_option("--input", cfg.inputs, "Trace file")->required()->expected(1);
  fitcmd->add_flag("--within-app-scale", cfg.within_app_scale,
                   "Dependent job scale from within-application spread");
  add_overhead(fitcmd);
  add_output(fitcmd, "Model file");

  auto* predict = app.add_subcommand("predict", "Model -> run-time samples");
  predict->add_option("--input", cfg.inputs, "Model file")->required()->expected(1);
  predict->add_option("--model", cfg.model_kind, "Model kind")->check(kinds);
  add_sampling(predict);
  add_overhead(predict);
  add_output(predict, "Output prefix");

  auto* online = app.add_subcommand("online", "Replay a run job by job");
  online->add_option("--input", cfg.inputs, "Model file")->required()->expected(1);
  online->add_option("--run", cfg.run_file, "Trace file holding the run")->required();
  online->add_option("--run-index", cfg.run_index, "Run position in the file");
  online->add_flag("--longest", cfg.longest, "Replay the longest run instead");
  online->add_option("--window", cfg.window, "Reclassify the run FIRST:LAST");
  online->add_option("--variant", cfg.variant, "A_mean handling")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
  online->add_option("--model", cfg.model_kind, "Model structure")->check(kinds);
  add_sampling(online);
  add_overhead(online);
  add_output(online, "Trajectory CSV");

  auto* synth = app.add_subcommand("synth", "Generator spec -> synthetic traces");
  synth->add_option("--input", cfg.inputs, "Generator spec")->required()->expected(1);
  synth->add_option("--seed", cfg.seed_override, "Override the spec's seed");
  synth->add_option("--runs", cfg.runs_override, "Override the spec's n_runs")
      ->check(CLI::PositiveNumber);
  add_output(synth, "Output prefix");

  auto* compare = app.add_subcommand("compare", "Predicted vs actual ECDFs");
  compare->add_option("--input", cfg.inputs, "Samples file")->required()->expected(1);
  compare->add_option("--actual", cfg.actual, "Trace file or samples file")
      ->required();
  compare->add_flag("--svg", cfg.svg, "Also write an SVG overlay");
  add_overhead(compare);
  add_output(compare, "Output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    log->error("{}", e.what());
    return kUsage;
  }
  if (cfg.threads == 0) cfg.threads = ro::default_thread_count();

  try {
    if (*ingest) return cmd_ingest(cfg, *log);
    if (*fitcmd) return cmd_fit(cfg, *log);
    if (*predict) return cmd_predict(cfg, *log);
    if (*online) return cmd_online(cfg, *log);
    if (*synth) return cmd_synth(cfg, *log);
    if (*compare) return cmd_compare(cfg, *log);
  } catch (const MissingInput& e) {
    log->error("{}", e.what());
    return kMissing;
  } catch (const ro::EmptyInputError& e) {
    log->error("{}", e.what());
    return kMissing;
  } catch (const ro::ParseError& e) {
    log->error("{}", e.what());
    return kParse;
  } catch (const ro::AggregateError& e) {
    log->error("{}", e.what());
    return kParse;
  } catch (const ro::InvariantError& e) {
    log->error("{}", e.what());
    return kInvariant;
  } catch (const ro::ArgumentError& e) {
    log->error("{}", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return kUsage;
  }
  return kUsage;
}
