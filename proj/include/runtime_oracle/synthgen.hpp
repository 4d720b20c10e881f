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

// Synthetic traces from a known hierarchical process.
//
// Per run r (random stream (seed, r)):
//   offset  a ~ N(iter_base.loc, app_offset_scale)
//   gc      with probability p, a += d, d ~ gc.delay
//   jobs    non-iterative k ~ noniter[k]; iterative ~ N(a, iter_base.scale)
//           each duration floored at duration_floor, laid out back to back
//           from t = 0
//   wall    job-sum + max(0, overhead draw)
// Non-iterative jobs take indices [0, leading_noniter) and the remainder
// after the iterative block.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "runtime_oracle/estimation.hpp"
#include "runtime_oracle/trace.hpp"

namespace runtime_oracle {

struct GcContamination {
  double probability = 0.0;
  NormalParams delay;  // loc > 0
};

struct GeneratorSpec {
  std::size_t n_runs = 1;
  std::vector<NormalParams> noniter;  // one per non-iterative job
  // How many non-iterative jobs precede the iterative block; defaults to all.
  std::optional<std::size_t> leading_noniter;
  std::size_t n_iter = 1;
  NormalParams iter_base;
  double app_offset_scale = 0.0;
  NormalParams overhead_true;
  std::optional<GcContamination> gc;
  std::uint64_t seed = 0;
  double duration_floor = 0.001;

  std::size_t leading() const {
    return leading_noniter.value_or(noniter.size());
  }
  IterativeWindow window() const { return {leading(), leading() + n_iter - 1}; }
  // Throws ArgumentError describing the first invalid field.
  void validate() const;
};

struct RunTruth {
  double offset = 0.0;  // realized application mean, including any GC delay
  bool gc_hit = false;
  double gc_delay = 0.0;
};

struct GeneratedTraces {
  TraceSet traces;
  GeneratorSpec spec;
  std::vector<RunTruth> truth;
};

GeneratedTraces generate(const GeneratorSpec& spec);

// Spec document fields: "n_runs", "noniter" ([{"loc","scale"}]),
// "leading_noniter" (optional), "n_iter", "iter_base", "app_offset_scale",
// "overhead_true", "gc" (null or {"probability","delay"}), "seed",
// "duration_floor" (optional, default 0.001).
std::string serialize_spec(const GeneratorSpec& spec);
GeneratorSpec parse_spec(std::string_view text);

// {"spec": <spec document>, "runs": [{"app_id","offset","gc_hit","gc_delay"}]}
std::string serialize_truth(const GeneratedTraces& generated);

}  // namespace runtime_oracle
