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

// Ground-truth distributions of S_n: exhaustive enumeration of all C(n^2, n)
// placements for tiny boards, and an exact inclusion-exclusion PMF for
// moderate ones.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rooksafe/board.hpp"
#include "rooksafe/exact.hpp"
#include "rooksafe/rational.hpp"

namespace rooksafe {

/// Thrown when a request exceeds an enumeration or table-size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kMaxBruteForceSide = 5;
inline constexpr std::uint64_t kMaxBruteForceSideOverride = 6;
inline constexpr std::uint64_t kMaxInclusionExclusionSide = 64;

struct DistributionTable {
  std::uint64_t n = 0;
  std::map<std::uint64_t, Rational> pmf;  // safe count -> probability, zero masses omitted

  Rational probability(std::uint64_t safe) const {
    const auto it = pmf.find(safe);
    return it == pmf.end() ? Rational{} : it->second;
  }

  Rational total() const {
    Rational sum;
    for (const auto& [s, p] : pmf) {
      sum += p;
    }
    return sum;
  }

  Rational mean() const {
    Rational sum;
    for (const auto& [s, p] : pmf) {
      sum += Rational(s) * p;
    }
    return sum;
  }

  Rational variance() const {
    Rational second;
    for (const auto& [s, p] : pmf) {
      second += Rational(s) * Rational(s) * p;
    }
    const Rational m = mean();
    return second - m * m;
  }

  friend bool operator==(const DistributionTable&, const DistributionTable&) = default;
};

/// Number of boards with a given (occupied rows, occupied columns) pair.
struct JointOccupancyTable {
  std::uint64_t n = 0;
  std::map<std::pair<std::uint64_t, std::uint64_t>, BigInt> counts;
  BigInt total;  // C(n^2, n)

  friend bool operator==(const JointOccupancyTable&, const JointOccupancyTable&) = default;
};

/// Collapses (R, C) counts onto S = (n - R)(n - C).
inline DistributionTable to_distribution(const JointOccupancyTable& joint) {
  std::map<std::uint64_t, BigInt> by_safe;
  for (const auto& [rc, count] : joint.counts) {
    const auto [rows, cols] = rc;
    by_safe[(joint.n - rows) * (joint.n - cols)] += count;
  }
  DistributionTable table;
  table.n = joint.n;
  for (const auto& [s, count] : by_safe) {
    if (count != 0) {
      table.pmf.emplace(s, Rational(count, joint.total));
    }
  }
  return table;
}

struct EnumerationOptions {
  bool allow_large = false;  // lifts the cap from kMaxBruteForceSide to kMaxBruteForceSideOverride
  unsigned workers = 1;
};

namespace detail {

// Tallies every board whose largest cell is `top`; the remaining n-1 cells
// run over the (n-1)-subsets of [0, top) in colex order.
inline void enumerate_with_top(std::uint64_t n, Cell top, std::vector<std::uint64_t>& row_bit,
                               std::vector<std::uint64_t>& col_bit,
                               std::vector<std::uint64_t>& counts) {
  const std::size_t k = n - 1;
  if (top < k) {
    return;
  }
  std::vector<Cell> combo(k);
  std::iota(combo.begin(), combo.end(), Cell{0});
  const std::uint64_t stride = n + 1;
  while (true) {
    std::uint64_t rows = row_bit[top];
    std::uint64_t cols = col_bit[top];
    for (const Cell c : combo) {
      rows |= row_bit[c];
      cols |= col_bit[c];
    }
    ++counts[static_cast<std::uint64_t>(std::popcount(rows)) * stride +
             static_cast<std::uint64_t>(std::popcount(cols))];

    std::size_t i = 0;
    while (i < k && combo[i] + 1 == (i + 1 < k ? combo[i + 1] : top)) {
      ++i;
    }
    if (i == k) {
      break;
    }
    ++combo[i];
    for (std::size_t j = 0; j < i; ++j) {
      combo[j] = j;
    }
  }
}

}  // namespace detail

/// Exhaustive (R, C) tally over every n-subset of the n^2 cells. Worker w
/// handles the subsets whose largest cell t satisfies (t - n + 1) % workers == w;
/// the merged integer counts do not depend on the worker count.
inline JointOccupancyTable brute_force_joint(std::uint64_t n, const EnumerationOptions& options = {}) {
  detail::require_board_side(n, "brute_force_distribution");
  const std::uint64_t cap = options.allow_large ? kMaxBruteForceSideOverride : kMaxBruteForceSide;
  if (n > cap) {
    throw CapExceeded("brute_force_distribution: n = " + std::to_string(n) +
                      " exceeds the enumeration cap of " + std::to_string(cap) +
                      (options.allow_large ? "" : " (override permits " +
                                                      std::to_string(kMaxBruteForceSideOverride) + ")"));
  }
  const std::uint64_t cells = n * n;
  std::vector<std::uint64_t> row_bit(cells);
  std::vector<std::uint64_t> col_bit(cells);
  for (Cell c = 0; c < cells; ++c) {
    row_bit[c] = std::uint64_t{1} << (c / n);
    col_bit[c] = std::uint64_t{1} << (c % n);
  }

  const unsigned workers = std::max(1U, options.workers);
  const std::uint64_t slots = (n + 1) * (n + 1);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(slots, 0));
  auto run = [&](unsigned w) {
    for (Cell top = n - 1 + w; top < cells; top += workers) {
      detail::enumerate_with_top(n, top, row_bit, col_bit, partial[w]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(run, w);
    }
  }

  JointOccupancyTable joint;
  joint.n = n;
  joint.total = 0;
  for (std::uint64_t r = 0; r <= n; ++r) {
    for (std::uint64_t c = 0; c <= n; ++c) {
      BigInt count = 0;
      for (const auto& tally : partial) {
        count += static_cast<unsigned long>(tally[r * (n + 1) + c]);
      }
      if (count != 0) {
        joint.total += count;
        joint.counts.emplace(std::make_pair(r, c), std::move(count));
      }
    }
  }
  return joint;
}

inline DistributionTable brute_force_distribution(std::uint64_t n,
                                                  const EnumerationOptions& options = {}) {
  return to_distribution(brute_force_joint(n, options));
}

/// T(r, c, n): n-subsets of an r x c grid that touch every row and column,
///   sum_{i<=r} sum_{j<=c} (-1)^(i+j) C(r,i) C(c,j) C((r-i)(c-j), n).
inline BigInt coverage_count(std::uint64_t rows, std::uint64_t cols, std::uint64_t n) {
  BigInt total = 0;
  for (std::uint64_t i = 0; i <= rows; ++i) {
    for (std::uint64_t j = 0; j <= cols; ++j) {
      BigInt term = binom(rows, i) * binom(cols, j) * binom((rows - i) * (cols - j), n);
      if ((i + j) % 2 == 0) {
        total += term;
      } else {
        total -= term;
      }
    }
  }
  return total;
}

/// Exact (R, C) counts: C(n, r) C(n, c) T(r, c, n). The double sum in T is
/// evaluated as two nested single sums sharing C(p, n) for p = i*j, which
/// brings the whole table to O(n^3) big-integer operations.
inline JointOccupancyTable exact_joint(std::uint64_t n) {
  detail::require_board_side(n, "exact_distribution");
  if (n > kMaxInclusionExclusionSide) {
    throw CapExceeded("exact_distribution: n = " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(kMaxInclusionExclusionSide));
  }
  const std::uint64_t side = n + 1;
  std::vector<BigInt> choose_n(n * n + 1);  // C(p, n)
  for (std::uint64_t p = 0; p <= n * n; ++p) {
    choose_n[p] = binom(p, n);
  }
  std::vector<BigInt> small(side * side);  // C(a, b), a, b <= n
  for (std::uint64_t a = 0; a <= n; ++a) {
    for (std::uint64_t b = 0; b <= a; ++b) {
      small[a * side + b] = binom(a, b);
    }
  }
  auto choose = [&](std::uint64_t a, std::uint64_t b) -> const BigInt& { return small[a * side + b]; };

  // partial[i][c] = sum_{j<=c} (-1)^(c-j) C(c, j) C(i*j, n)
  std::vector<BigInt> partial(side * side);
  for (std::uint64_t i = 0; i <= n; ++i) {
    for (std::uint64_t c = 0; c <= n; ++c) {
      BigInt acc = 0;
      for (std::uint64_t j = 0; j <= c; ++j) {
        if ((c - j) % 2 == 0) {
          acc += choose(c, j) * choose_n[i * j];
        } else {
          acc -= choose(c, j) * choose_n[i * j];
        }
      }
      partial[i * side + c] = std::move(acc);
    }
  }

  JointOccupancyTable joint;
  joint.n = n;
  joint.total = binom(n * n, n);
  for (std::uint64_t r = 1; r <= n; ++r) {
    for (std::uint64_t c = 1; c <= n; ++c) {
      if (r * c < n) {
        continue;
      }
      BigInt covered = 0;
      for (std::uint64_t i = 0; i <= r; ++i) {
        if ((r - i) % 2 == 0) {
          covered += choose(r, i) * partial[i * side + c];
        } else {
          covered -= choose(r, i) * partial[i * side + c];
        }
      }
      if (covered != 0) {
        joint.counts.emplace(std::make_pair(r, c), choose(n, r) * choose(n, c) * covered);
      }
    }
  }
  return joint;
}

inline DistributionTable exact_distribution(std::uint64_t n) { return to_distribution(exact_joint(n)); }

}  // namespace rooksafe
