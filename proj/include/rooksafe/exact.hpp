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

// Closed-form probabilities and moments for the number of safe squares S_n
// when n rooks occupy n distinct cells of an n x n board chosen uniformly
// from all C(n^2, n) placements. A square is safe when neither its row nor
// its column holds a rook.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "rooksafe/rational.hpp"

namespace rooksafe {

namespace detail {

// n^2 must fit in an unsigned long for the binomial routines.
inline constexpr std::uint64_t kMaxBoardSide = std::uint64_t{1} << 31;

inline void require_board_side(std::uint64_t n, const char* where) {
  if (n == 0) {
    throw std::invalid_argument(std::string(where) + ": n must be positive");
  }
  if (n > kMaxBoardSide) {
    throw std::invalid_argument(std::string(where) + ": n too large");
  }
}

}  // namespace detail

/// C(m, k), zero when k > m.
inline BigInt binom(std::uint64_t m, std::uint64_t k) {
  if (k > m) {
    return 0;
  }
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
  return out;
}

/// Board of side n with a*n + b cells removed: the ratio
/// C(n^2 - a n - b, n) / C(n^2, n) is the probability that all n rooks avoid
/// them.
struct RatioParams {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::uint64_t n = 1;
};

inline Rational ratio(const RatioParams& params) {
  detail::require_board_side(params.n, "ratio");
  if (params.a <= 0) {
    throw std::invalid_argument("ratio: a must be a positive integer");
  }
  const BigInt n = static_cast<unsigned long>(params.n);
  const BigInt remaining = n * n - BigInt(static_cast<long>(params.a)) * n -
                           BigInt(static_cast<long>(params.b));
  if (remaining < n) {
    return 0;
  }
  if (!remaining.fits_ulong_p()) {
    throw std::out_of_range("ratio: n^2 - a n - b out of range");
  }
  return Rational(binom(remaining.get_ui(), params.n), binom(params.n * params.n, params.n));
}

/// Limit of ratio({a, b, n}) as n grows, for any fixed b.
inline double ratio_limit(std::int64_t a) {
  if (a <= 0) {
    throw std::invalid_argument("ratio_limit: a must be a positive integer");
  }
  return std::exp(-static_cast<double>(a));
}

/// Probability that a fixed square is safe: C((n-1)^2, n) / C(n^2, n).
inline Rational mu_n(std::uint64_t n) {
  detail::require_board_side(n, "mu_n");
  return ratio({.a = 2, .b = -1, .n = n});
}

// Ordered pairs of distinct squares, split by whether they share a line.
inline BigInt same_line_pairs(std::uint64_t n) {
  const BigInt m = static_cast<unsigned long>(n);
  return 2 * (m - 1) * m * m;
}
inline BigInt disjoint_pairs(std::uint64_t n) {
  const BigInt m = static_cast<unsigned long>(n);
  return m * m * (m - 1) * (m - 1);
}
inline BigInt distinct_pairs(std::uint64_t n) {
  const BigInt m = static_cast<unsigned long>(n);
  return m * m * (m * m - 1);
}

struct ExactMoments {
  std::uint64_t n = 0;
  Rational mu_n;             // P(square safe)
  Rational expected_safe;    // E[S_n]
  Rational joint_same_line;  // P(both safe), the two squares share a row or column
  Rational joint_disjoint;   // P(both safe), distinct rows and columns
  Rational var_S;            // Var(S_n)
  Rational var_fraction;     // Var(S_n / n^2)

  Rational expected_fraction() const { return mu_n; }
};

/// Mean and variance of S_n through the indicator decomposition
///   Var(S) = n^2 (mu - mu^2) + sum over ordered distinct pairs of Cov,
/// where the pair sum is
///   2(n-1)n^2 * joint_same_line + n^2(n-1)^2 * joint_disjoint - n^2(n^2-1) mu^2.
inline ExactMoments exact_moments(std::uint64_t n) {
  detail::require_board_side(n, "exact_moments");
  ExactMoments m;
  m.n = n;
  m.mu_n = mu_n(n);
  const BigInt cells = BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  m.expected_safe = Rational(cells) * m.mu_n;
  m.joint_same_line = ratio({.a = 3, .b = -2, .n = n});
  m.joint_disjoint = ratio({.a = 4, .b = -4, .n = n});

  const Rational mu_sq = m.mu_n * m.mu_n;
  m.var_S = Rational(cells) * (m.mu_n - mu_sq) + Rational(same_line_pairs(n)) * m.joint_same_line +
            Rational(disjoint_pairs(n)) * m.joint_disjoint - Rational(distinct_pairs(n)) * mu_sq;
  m.var_fraction = m.var_S / Rational(cells * cells);
  return m;
}

/// P(every column holds a rook) = n^n / C(n^2, n): each of the n columns gets
/// exactly one rook, in any of its n rows.
inline Rational prob_all_columns_occupied(std::uint64_t n) {
  detail::require_board_side(n, "prob_all_columns_occupied");
  BigInt placements;
  mpz_ui_pow_ui(placements.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n));
  return Rational(placements, binom(n * n, n));
}

/// P(S_n = 0). No square is safe iff every row or every column is occupied;
/// the intersection is the n! permutation placements.
inline Rational prob_no_safe_square(std::uint64_t n) {
  detail::require_board_side(n, "prob_no_safe_square");
  BigInt placements;
  mpz_ui_pow_ui(placements.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n));
  BigInt permutations;
  mpz_fac_ui(permutations.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(2 * placements - permutations, binom(n * n, n));
}

/// Chebyshev: P(|X - E X| >= k sd) <= 1/k^2.
inline double chebyshev_bound(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("chebyshev_bound: k must be a positive finite number");
  }
  return 1.0 / (k * k);
}

struct LimitConstants {
  double mu_limit = 0;        // lim mu_n = e^-2
  double variance_slope = 0;  // (2/e^3)(1 - 1/e), the leading-order slope from dropping
                              // the O(1/n) corrections of each binomial ratio
  double chebyshev_C = 0;     // 2(e-1)/e^4, the same constant rewritten
  // lim n Var(S_n/n^2) once those corrections are kept: ratio(a, b, n) =
  // e^-a (1 - (b + a(a+1)/2)/n + O(1/n^2)) gives 2/e^3 - 4/e^4.
  double corrected_variance_slope = 0;
};

inline LimitConstants limit_constants() {
  const double e = std::exp(1.0);
  LimitConstants c;
  c.mu_limit = std::exp(-2.0);
  c.variance_slope = 2.0 * std::exp(-3.0) - 2.0 * std::exp(-4.0);
  c.chebyshev_C = 2.0 * (e - 1.0) / std::exp(4.0);
  c.corrected_variance_slope = 2.0 * std::exp(-3.0) - 4.0 * std::exp(-4.0);
  return c;
}

}  // namespace rooksafe
