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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "rooksafe/exact.hpp"
#include "rooksafe/rational.hpp"
#include "rooksafe/simulate.hpp"

namespace rooksafe {

inline double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

inline double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

struct ConvergenceRow {
  std::uint64_t n = 0;
  double exact_mu = 0;
  double simulated_mu = 0;       // mean of S / n^2 over the trials
  double abs_gap_to_limit = 0;   // |exact_mu - e^-2|
  double var_slope_estimate = 0; // n Var(S_n / n^2)
};

inline ConvergenceRow convergence_row(std::uint64_t n, std::uint64_t trials, std::uint64_t seed,
                                      const RunOptions& options = {}) {
  const ExactMoments moments = exact_moments(n);
  const SimSummary summary = run_simulation({.n = n, .trials = trials, .master_seed = seed}, options);
  const BigInt cells = BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  ConvergenceRow row;
  row.n = n;
  row.exact_mu = to_double(moments.mu_n);
  row.simulated_mu =
      to_double(Rational(summary.sum_S, cells * static_cast<unsigned long>(summary.trials_done)));
  row.abs_gap_to_limit = std::abs(row.exact_mu - std::exp(-2.0));
  row.var_slope_estimate = to_double(moments.var_fraction * Rational(n));
  return row;
}

inline std::vector<ConvergenceRow> convergence_table(std::span<const std::uint64_t> n_list,
                                                     std::uint64_t trials, std::uint64_t seed,
                                                     const RunOptions& options = {}) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (const std::uint64_t n : n_list) {
    rows.push_back(convergence_row(n, trials, seed, options));
  }
  return rows;
}

/// Fraction of trials with |S/n^2 - mu_n| >= k sigma_n, sigma_n the exact
/// standard deviation of S/n^2.
inline double chebyshev_exceedance(const SimSummary& summary, const ExactMoments& moments, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("chebyshev_exceedance: k must be a positive finite number");
  }
  if (summary.n != moments.n) {
    throw std::invalid_argument("chebyshev_exceedance: summary and moments are for different n");
  }
  if (summary.trials_done == 0) {
    throw std::invalid_argument("chebyshev_exceedance: empty summary");
  }
  const BigInt cells = BigInt(static_cast<unsigned long>(summary.n)) * static_cast<unsigned long>(summary.n);
  const double threshold = k * std::sqrt(to_double(moments.var_fraction));
  std::uint64_t exceeding = 0;
  for (const auto& [s, c] : summary.histogram) {
    const Rational deviation = abs(Rational(BigInt(static_cast<unsigned long>(s)), cells) - moments.mu_n);
    if (to_double(deviation) >= threshold) {
      exceeding += c;
    }
  }
  return static_cast<double>(exceeding) / static_cast<double>(summary.trials_done);
}

/// Point mass of a lattice-valued sample.
struct Atom {
  double value = 0;
  std::uint64_t count = 0;
};

/// Kolmogorov-Smirnov distance between the empirical CDF of lattice data and a
/// Gaussian CDF, with both evaluated at the midpoints value +- half_step
/// between lattice points. Atoms must be sorted ascending.
inline double ks_statistic_midpoint(std::span<const Atom> atoms, double half_step, double mean,
                                    double sd) {
  std::uint64_t total = 0;
  for (const Atom& a : atoms) {
    total += a.count;
  }
  if (total == 0) {
    throw std::invalid_argument("ks_statistic_midpoint: no observations");
  }
  double worst = 0;
  std::uint64_t below = 0;
  for (const Atom& a : atoms) {
    const double before = static_cast<double>(below) / static_cast<double>(total);
    below += a.count;
    const double after = static_cast<double>(below) / static_cast<double>(total);
    worst = std::max(worst, std::abs(before - normal_cdf(a.value - half_step, mean, sd)));
    worst = std::max(worst, std::abs(after - normal_cdf(a.value + half_step, mean, sd)));
  }
  return worst;
}

struct GaussianComparison {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double ks_statistic = 0;
  double skewness = 0;
  double excess_kurtosis = 0;
  double reference_mean = 0;
  double reference_sd = 0;
  bool degenerate_support = false;  // two or fewer distinct values; a Gaussian fit is meaningless
};

inline constexpr std::uint64_t kMinGaussianTrials = 1000;

/// Compares the sampled distribution of scale * S with the Gaussian of the
/// same mean and variance. scale = 1 / n^2 gives the safe fraction; the KS
/// distance does not depend on the scale.
inline GaussianComparison gaussian_comparison(const SimSummary& summary, double scale = 1.0) {
  if (summary.trials_done < kMinGaussianTrials) {
    throw std::invalid_argument("gaussian_comparison: needs at least 1000 trials");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("gaussian_comparison: scale must be positive");
  }
  const EmpiricalMoments em = empirical_moments(summary);
  if (!(*em.variance > 0.0)) {
    throw std::invalid_argument("gaussian_comparison: sample has zero variance");
  }

  // Plug-in central moments, exact from the histogram.
  const Rational trials(summary.trials_done);
  const Rational mean = Rational(summary.sum_S) / trials;
  Rational m2, m3, m4;
  for (const auto& [s, c] : summary.histogram) {
    const Rational d = Rational(s) - mean;
    const Rational d2 = d * d;
    const Rational weight(c);
    m2 += weight * d2;
    m3 += weight * d2 * d;
    m4 += weight * d2 * d2;
  }
  m2 /= trials;
  m3 /= trials;
  m4 /= trials;

  GaussianComparison out;
  out.n = summary.n;
  out.trials = summary.trials_done;
  out.reference_mean = em.mean * scale;
  out.reference_sd = std::sqrt(*em.variance) * scale;
  const double m2d = to_double(m2);
  out.skewness = to_double(m3) / std::pow(m2d, 1.5);
  out.excess_kurtosis = to_double(m4 / (m2 * m2)) - 3.0;
  out.degenerate_support = summary.histogram.size() <= 2;

  std::vector<Atom> atoms;
  atoms.reserve(summary.histogram.size());
  for (const auto& [s, c] : summary.histogram) {
    atoms.push_back({static_cast<double>(s) * scale, c});
  }
  out.ks_statistic = ks_statistic_midpoint(atoms, 0.5 * scale, out.reference_mean, out.reference_sd);
  return out;
}

}  // namespace rooksafe
