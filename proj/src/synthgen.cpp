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

#include "runtime_oracle/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "json_util.hpp"
#include "runtime_oracle/error.hpp"
#include "runtime_oracle/random.hpp"

namespace runtime_oracle {

using nlohmann::json;

namespace {

void check_normal(const NormalParams& p, const std::string& name) {
  if (!std::isfinite(p.loc) || !std::isfinite(p.scale) || p.scale < 0.0) {
    throw ArgumentError(name + " needs finite loc and scale >= 0");
  }
}

std::string app_id_for(std::uint64_t seed, std::size_t run) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "synth-%llu-%04zu",
                static_cast<unsigned long long>(seed), run);
  return buf;
}

}  // namespace

void GeneratorSpec::validate() const {
  if (n_runs == 0) throw ArgumentError("n_runs must be positive");
  if (n_iter == 0) throw ArgumentError("n_iter must be positive");
  if (leading() > noniter.size()) {
    throw ArgumentError("leading_noniter exceeds the number of noniter jobs");
  }
  for (std::size_t k = 0; k < noniter.size(); ++k) {
    check_normal(noniter[k], "noniter[" + std::to_string(k) + "]");
  }
  check_normal(iter_base, "iter_base");
  check_normal(overhead_true, "overhead_true");
  if (!std::isfinite(app_offset_scale) || app_offset_scale < 0.0) {
    throw ArgumentError("app_offset_scale must be finite and >= 0");
  }
  if (!std::isfinite(duration_floor) || duration_floor <= 0.0) {
    throw ArgumentError("duration_floor must be positive");
  }
  if (gc) {
    if (!(gc->probability >= 0.0 && gc->probability <= 1.0)) {
      throw ArgumentError("gc.probability must lie in [0, 1]");
    }
    check_normal(gc->delay, "gc.delay");
    if (gc->delay.loc <= 0.0) throw ArgumentError("gc.delay.loc must be > 0");
  }
}

GeneratedTraces generate(const GeneratorSpec& spec) {
  spec.validate();
  GeneratedTraces out;
  out.spec = spec;
  out.traces.iterative_window = spec.window();

  const std::size_t n_jobs = spec.noniter.size() + spec.n_iter;
  const IterativeWindow window = spec.window();
  for (std::size_t r = 0; r < spec.n_runs; ++r) {
    RandomStream rng(spec.seed, r);
    RunTruth truth;
    truth.offset = rng.normal(spec.iter_base.loc, spec.app_offset_scale);
    if (spec.gc) {
      // Both draws always happen so the stream layout does not depend on p.
      const double u = rng.uniform();
      const double delay = rng.normal(spec.gc->delay.loc, spec.gc->delay.scale);
      if (u < spec.gc->probability) {
        truth.gc_hit = true;
        truth.gc_delay = delay;
        truth.offset += delay;
      }
    }

    ApplicationRun run;
    run.app_id = app_id_for(spec.seed, r);
    double clock = 0.0;
    std::size_t noniter_k = 0;
    for (std::size_t i = 0; i < n_jobs; ++i) {
      JobRecord job;
      job.index = i;
      double duration;
      if (window.contains(i)) {
        job.kind = JobKind::Iterative;
        duration = rng.normal(truth.offset, spec.iter_base.scale);
      } else {
        job.kind = JobKind::NonIterative;
        const auto& p = spec.noniter[noniter_k++];
        duration = rng.normal(p.loc, p.scale);
      }
      duration = std::max(duration, spec.duration_floor);
      job.start_s = clock;
      job.end_s = clock + duration;
      clock = job.end_s;
      run.jobs.push_back(job);
    }
    const double overhead =
        rng.normal(spec.overhead_true.loc, spec.overhead_true.scale);
    run.wall_time_s = clock + std::max(0.0, overhead);
    out.traces.runs.push_back(std::move(run));
    out.truth.push_back(truth);
  }
  audit(out.traces);
  return out;
}

namespace {

json normal_json(const NormalParams& p) {
  return {{"loc", p.loc}, {"scale", p.scale}};
}

NormalParams normal_from(const detail::JsonReader& node) {
  return {node.child("loc").as_number(), node.child("scale").as_number()};
}

json spec_json(const GeneratorSpec& spec) {
  json noniter = json::array();
  for (const auto& p : spec.noniter) noniter.push_back(normal_json(p));
  json doc = {{"n_runs", spec.n_runs},
              {"noniter", std::move(noniter)},
              {"n_iter", spec.n_iter},
              {"iter_base", normal_json(spec.iter_base)},
              {"app_offset_scale", spec.app_offset_scale},
              {"overhead_true", normal_json(spec.overhead_true)},
              {"seed", spec.seed},
              {"duration_floor", spec.duration_floor}};
  if (spec.leading_noniter) doc["leading_noniter"] = *spec.leading_noniter;
  if (spec.gc) {
    doc["gc"] = {{"probability", spec.gc->probability},
                 {"delay", normal_json(spec.gc->delay)}};
  } else {
    doc["gc"] = nullptr;
  }
  return doc;
}

}  // namespace

std::string serialize_spec(const GeneratorSpec& spec) {
  return spec_json(spec).dump(2) + "\n";
}

GeneratorSpec parse_spec(std::string_view text) {
  const json doc = detail::parse_json(text);
  const detail::JsonReader root(doc, "");
  GeneratorSpec spec;
  spec.n_runs = root.child("n_runs").as_index();
  const auto noniter = root.child("noniter");
  noniter.require_array();
  for (std::size_t k = 0; k < noniter.node().size(); ++k) {
    spec.noniter.push_back(normal_from(noniter.at(k)));
  }
  if (root.has("leading_noniter")) {
    spec.leading_noniter = root.child("leading_noniter").as_index();
  }
  spec.n_iter = root.child("n_iter").as_index();
  spec.iter_base = normal_from(root.child("iter_base"));
  spec.app_offset_scale = root.child("app_offset_scale").as_number();
  spec.overhead_true = normal_from(root.child("overhead_true"));
  if (root.has("gc") && !root.child("gc").node().is_null()) {
    const auto gc = root.child("gc");
    spec.gc = GcContamination{gc.child("probability").as_number(),
                              normal_from(gc.child("delay"))};
  }
  spec.seed = root.child("seed").as_u64();
  if (root.has("duration_floor")) {
    spec.duration_floor = root.child("duration_floor").as_number();
  }
  try {
    spec.validate();
  } catch (const ArgumentError& e) {
    throw ParseError("/", e.what());
  }
  return spec;
}

std::string serialize_truth(const GeneratedTraces& generated) {
  json runs = json::array();
  for (std::size_t r = 0; r < generated.truth.size(); ++r) {
    const auto& t = generated.truth[r];
    runs.push_back({{"app_id", generated.traces.runs[r].app_id},
                    {"offset", t.offset},
                    {"gc_hit", t.gc_hit},
                    {"gc_delay", t.gc_delay}});
  }
  json doc = {{"spec", spec_json(generated.spec)}, {"runs", std::move(runs)}};
  return doc.dump(2) + "\n";
}

}  // namespace runtime_oracle
