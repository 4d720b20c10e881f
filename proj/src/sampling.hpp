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

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "runtime_oracle/predictor.hpp"
#include "runtime_oracle/random.hpp"

namespace runtime_oracle::detail {

// Tracks negative component draws for one sample.
class DrawCounter {
 public:
  double operator()(double value) {
    if (value < 0.0) ++negatives_;
    return value;
  }
  std::size_t negatives() const { return negatives_; }

 private:
  std::size_t negatives_ = 0;
};

// Fills `out.values[i] = draw(RandomStream(seed, i), counter)` for every i,
// splitting positions into contiguous blocks across threads. The result is
// independent of the thread count.
template <typename DrawFn>
void fill_samples(PredictiveSample& out, std::size_t samples,
                  std::uint64_t seed, unsigned threads, const DrawFn& draw) {
  out.values.assign(samples, 0.0);
  out.seed = seed;
  if (threads == 0) threads = default_thread_count();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, samples / 1024));
  std::vector<std::size_t> negatives(workers, 0);

  auto run_block = [&](std::size_t worker) {
    const std::size_t begin = samples * worker / workers;
    const std::size_t end = samples * (worker + 1) / workers;
    DrawCounter counter;
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream stream(seed, i);
      out.values[i] = draw(stream, counter);
    }
    negatives[worker] = counter.negatives();
  };

  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run_block, w);
    run_block(0);
  }
  out.negative_draws = 0;
  for (std::size_t n : negatives) out.negative_draws += n;
}

inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace runtime_oracle::detail
