// Copyright 2026 The rooksafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seed-reproducible Monte Carlo over uniform rook placements.
//
// Trials are cut into fixed chunks of kTrialsPerSubstream; chunk k draws from
// Xoshiro256(substream_seed(master_seed, k)). `streams` only groups chunks
// into partitions (chunk k goes to partition k % streams) that run in
// parallel, and accumulators are exact integers, so the summary is the same
// for every streams value and every thread schedule.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "rooksafe/board.hpp"
#include "rooksafe/exact.hpp"
#include "rooksafe/rational.hpp"
#include "rooksafe/rng.hpp"

namespace rooksafe {

inline constexpr std::uint64_t kTrialsPerSubstream = 4096;
// Above this side length the n^2 index array is replaced by rejection
// sampling into a hash set.
inline constexpr std::uint64_t kFisherYatesMaxSide = 2048;

enum class SamplingStrategy { kAuto, kFisherYates, kRejection };

/// Draws uniform n-subsets of the n^2 cells. Reuses its buffers between draws.
class BoardSampler {
 public:
  explicit BoardSampler(std::uint64_t n, SamplingStrategy strategy = SamplingStrategy::kAuto)
      : n_(n), cells_(n * n) {
    detail::require_board_side(n, "BoardSampler");
    if (strategy == SamplingStrategy::kAuto) {
      strategy = n > kFisherYatesMaxSide ? SamplingStrategy::kRejection : SamplingStrategy::kFisherYates;
    }
    strategy_ = strategy;
    chosen_.resize(n);
    if (strategy_ == SamplingStrategy::kFisherYates) {
      index_.resize(cells_);
      for (Cell c = 0; c < cells_; ++c) {
        index_[c] = c;
      }
      swaps_.resize(n);
    } else {
      seen_.reserve(2 * n);
    }
  }

  std::uint64_t n() const { return n_; }
  SamplingStrategy strategy() const { return strategy_; }

  /// Cells of one placement, in draw order. Valid until the next call.
  template <class Rng>
  std::span<const Cell> draw(Rng& rng) {
    if (strategy_ == SamplingStrategy::kFisherYates) {
      // Partial Fisher-Yates over the first n slots, then undo the swaps so
      // the index array is the identity again for the next draw.
      for (std::uint64_t i = 0; i < n_; ++i) {
        const std::uint64_t j = i + uniform_below(rng, cells_ - i);
        std::swap(index_[i], index_[j]);
        swaps_[i] = j;
        chosen_[i] = index_[i];
      }
      for (std::uint64_t i = n_; i-- > 0;) {
        std::swap(index_[i], index_[swaps_[i]]);
      }
    } else {
      seen_.clear();
      std::uint64_t filled = 0;
      while (filled < n_) {
        const Cell c = uniform_below(rng, cells_);
        if (seen_.insert(c).second) {
          chosen_[filled++] = c;
        }
      }
    }
    return chosen_;
  }

  template <class Rng>
  Board sample(Rng& rng) {
    const auto cells = draw(rng);
    return Board::from_cells(n_, std::vector<Cell>(cells.begin(), cells.end()));
  }

 private:
  std::uint64_t n_;
  std::uint64_t cells_;
  SamplingStrategy strategy_ = SamplingStrategy::kFisherYates;
  std::vector<Cell> index_;
  std::vector<std::uint64_t> swaps_;
  std::vector<Cell> chosen_;
  std::unordered_set<Cell> seen_;
};

/// One uniform placement in canonical form. Builds a fresh sampler; loops
/// should hold a BoardSampler instead.
template <class Rng>
Board sample_board(std::uint64_t n, Rng& rng) {
  BoardSampler sampler(n);
  return sampler.sample(rng);
}

struct SimConfig {
  std::uint64_t n = 1;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t streams = 1;

  void validate() const {
    detail::require_board_side(n, "SimConfig");
    if (trials == 0) {
      throw std::invalid_argument("SimConfig: trials must be positive");
    }
    if (streams == 0) {
      throw std::invalid_argument("SimConfig: streams must be positive");
    }
    if (streams > trials) {
      throw std::invalid_argument("SimConfig: streams must not exceed trials");
    }
  }
};

/// Mergeable Monte Carlo accumulator. sum_S and sum_S2 always agree with the
/// histogram.
struct SimSummary {
  std::uint64_t n = 0;
  std::uint64_t trials_done = 0;
  BigInt sum_S = 0;
  BigInt sum_S2 = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // safe count -> trials
  std::uint64_t master_seed = 0;

  void record(std::uint64_t safe, std::uint64_t count = 1) {
    if (count == 0) {
      return;
    }
    histogram[safe] += count;
    trials_done += count;
    const BigInt s = static_cast<unsigned long>(safe);
    const BigInt c = static_cast<unsigned long>(count);
    sum_S += s * c;
    sum_S2 += s * s * c;
  }

  static SimSummary from_histogram(std::uint64_t n, std::uint64_t master_seed,
                                   const std::map<std::uint64_t, std::uint64_t>& histogram) {
    SimSummary out;
    out.n = n;
    out.master_seed = master_seed;
    for (const auto& [s, c] : histogram) {
      out.record(s, c);
    }
    return out;
  }

  SimSummary& merge(const SimSummary& other) {
    if (other.n != n || other.master_seed != master_seed) {
      throw std::invalid_argument("SimSummary::merge: summaries come from different runs");
    }
    for (const auto& [s, c] : other.histogram) {
      histogram[s] += c;
    }
    trials_done += other.trials_done;
    sum_S += other.sum_S;
    sum_S2 += other.sum_S2;
    return *this;
  }

  friend bool operator==(const SimSummary&, const SimSummary&) = default;
};

inline SimSummary merge(SimSummary a, const SimSummary& b) { return a.merge(b); }

struct RunOptions {
  unsigned max_threads = 0;  // 0: hardware concurrency
};

/// Honors ROOKSAFE_THREADS when set to a positive integer.
inline unsigned default_thread_cap() {
  if (const char* env = std::getenv("ROOKSAFE_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) {
      return static_cast<unsigned>(std::min<unsigned long>(v, 1024));
    }
    throw std::invalid_argument("ROOKSAFE_THREADS must be a positive integer");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

inline SimSummary run_simulation(const SimConfig& config, const RunOptions& options = {}) {
  config.validate();
  const std::uint64_t chunks = (config.trials + kTrialsPerSubstream - 1) / kTrialsPerSubstream;
  const std::uint64_t partitions = std::min(config.streams, chunks);

  std::vector<std::map<std::uint64_t, std::uint64_t>> tallies(partitions);
  auto run_partition = [&](std::uint64_t p) {
    BoardSampler sampler(config.n);
    OccupancyCounter count(config.n);
    auto& tally = tallies[p];
    for (std::uint64_t k = p; k < chunks; k += partitions) {
      Xoshiro256 rng(substream_seed(config.master_seed, k));
      const std::uint64_t begin = k * kTrialsPerSubstream;
      const std::uint64_t end = std::min(config.trials, begin + kTrialsPerSubstream);
      for (std::uint64_t t = begin; t < end; ++t) {
        ++tally[count(sampler.draw(rng)).safe_count];
      }
    }
  };

  const unsigned cap = options.max_threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                                : options.max_threads;
  const auto threads = static_cast<unsigned>(std::min<std::uint64_t>(cap, partitions));
  if (threads <= 1) {
    for (std::uint64_t p = 0; p < partitions; ++p) {
      run_partition(p);
    }
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t p = next++; p < partitions; p = next++) {
          run_partition(p);
        }
      });
    }
  }

  SimSummary summary;
  summary.n = config.n;
  summary.master_seed = config.master_seed;
  for (const auto& tally : tallies) {
    summary.merge(SimSummary::from_histogram(config.n, config.master_seed, tally));
  }
  return summary;
}

struct EmpiricalMoments {
  double mean = 0;
  std::optional<double> variance;  // sample variance, needs at least two trials
};

/// Computed from the exact integer sums, rounded once.
inline EmpiricalMoments empirical_moments(const SimSummary& summary) {
  if (summary.trials_done == 0) {
    throw std::invalid_argument("empirical_moments: empty summary");
  }
  const BigInt t = static_cast<unsigned long>(summary.trials_done);
  EmpiricalMoments m;
  m.mean = to_double(Rational(summary.sum_S, t));
  if (summary.trials_done >= 2) {
    m.variance = to_double(Rational(summary.sum_S2 * t - summary.sum_S * summary.sum_S, t * (t - 1)));
  }
  return m;
}

/// Relative frequency of each observed safe count.
inline std::map<std::uint64_t, double> empirical_pmf(const SimSummary& summary) {
  std::map<std::uint64_t, double> out;
  for (const auto& [s, c] : summary.histogram) {
    out.emplace(s, to_double(Rational(c, summary.trials_done)));
  }
  return out;
}

}  // namespace rooksafe
