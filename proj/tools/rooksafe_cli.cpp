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

// rooksafe: exact and simulated statistics of safe squares under random rook
// placements.
//
//   rooksafe exact --n 3
//   rooksafe simulate --n 100 --trials 10000 --seed 7 --streams 8 --json
//   rooksafe distribution --n 5 --brute
//   rooksafe figures fig1 --out fig1.csv
//   rooksafe figures fig2 --n-grid 10,100 --out figs/
//
// Exit codes: 0 success, 2 usage or validation error, 3 resource cap refusal.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rooksafe/rooksafe.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rooksafe;

constexpr int kSchemaVersion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

// Shortest decimal that round-trips to the same double.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

ordered_json envelope(const std::string& command, ordered_json parameters, ordered_json payload) {
  ordered_json out;
  out["command"] = command;
  out["schema_version"] = kSchemaVersion;
  out["parameters"] = std::move(parameters);
  out["payload"] = std::move(payload);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open output file '" + path + "'");
  }
  file << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

struct Common {
  bool json = false;
  bool csv = false;
  std::string out;
};

void add_format_flags(CLI::App* cmd, Common& common) {
  auto* j = cmd->add_flag("--json", common.json, "Emit a JSON envelope");
  auto* c = cmd->add_flag("--csv", common.csv, "Emit CSV (default)");
  j->excludes(c);
  cmd->add_option("--out", common.out, "Write to this path instead of stdout");
}

RunOptions run_options() { return {.max_threads = default_thread_cap()}; }

// ---------------------------------------------------------------- exact

struct ExactArgs {
  Common common;
  std::uint64_t n = 0;
  bool float_only = false;
};

int cmd_exact(const ExactArgs& args) {
  const ExactMoments m = exact_moments(args.n);
  const std::vector<std::pair<std::string, Rational>> rows = {
      {"mu_n", m.mu_n},
      {"expected_safe", m.expected_safe},
      {"joint_same_line", m.joint_same_line},
      {"joint_disjoint", m.joint_disjoint},
      {"var_S", m.var_S},
      {"var_fraction", m.var_fraction},
      {"prob_all_columns_occupied", prob_all_columns_occupied(args.n)},
      {"prob_no_safe_square", prob_no_safe_square(args.n)},
  };
  if (args.common.json) {
    ordered_json payload;
    for (const auto& [name, value] : rows) {
      ordered_json entry;
      if (!args.float_only) entry["exact"] = value.str();
      entry["float"] = to_double(value);
      payload[name] = std::move(entry);
    }
    emit(dump(envelope("exact", {{"n", args.n}, {"float", args.float_only}}, payload)), args.common.out);
    return 0;
  }
  std::ostringstream os;
  os << (args.float_only ? "quantity,float\n" : "quantity,exact,float\n");
  for (const auto& [name, value] : rows) {
    os << name << ',';
    if (!args.float_only) os << value.str() << ',';
    os << fmt(to_double(value)) << '\n';
  }
  emit(os.str(), args.common.out);
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  std::uint64_t n = 0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint64_t streams = 1;
};

int cmd_simulate(const SimulateArgs& args) {
  const SimConfig config{.n = args.n, .trials = args.trials, .master_seed = args.seed, .streams = args.streams};
  config.validate();
  const SimSummary s = run_simulation(config, run_options());
  if (args.common.json) {
    const EmpiricalMoments em = empirical_moments(s);
    ordered_json histogram = ordered_json::array();
    for (const auto& [value, count] : s.histogram) {
      histogram.push_back({{"S", value}, {"count", count}});
    }
    ordered_json payload;
    payload["n"] = s.n;
    payload["trials"] = s.trials_done;
    payload["master_seed"] = s.master_seed;
    payload["sum_S"] = s.sum_S.get_str();
    payload["sum_S2"] = s.sum_S2.get_str();
    payload["mean"] = em.mean;
    payload["variance"] = em.variance ? ordered_json(*em.variance) : ordered_json(nullptr);
    payload["histogram"] = std::move(histogram);
    // streams is an execution detail and deliberately absent: output must not depend on it.
    emit(dump(envelope("simulate", {{"n", args.n}, {"trials", args.trials}, {"seed", args.seed}}, payload)),
         args.common.out);
    return 0;
  }
  std::ostringstream os;
  os << "S,count\n";
  for (const auto& [value, count] : s.histogram) {
    os << value << ',' << count << '\n';
  }
  emit(os.str(), args.common.out);
  return 0;
}

// ---------------------------------------------------------------- distribution

struct DistributionArgs {
  Common common;
  std::uint64_t n = 0;
  bool brute = false;
  bool allow_large_enum = false;
};

int cmd_distribution(const DistributionArgs& args) {
  const DistributionTable table =
      args.brute ? brute_force_distribution(
                       args.n, {.allow_large = args.allow_large_enum, .workers = default_thread_cap()})
                 : exact_distribution(args.n);
  if (args.common.json) {
    ordered_json rows = ordered_json::array();
    for (const auto& [s, p] : table.pmf) {
      rows.push_back({{"S", s},
                      {"probability_num", p.numerator().get_str()},
                      {"probability_den", p.denominator().get_str()},
                      {"probability_float", to_double(p)}});
    }
    const std::string method = args.brute ? "enumeration" : "inclusion_exclusion";
    emit(dump(envelope("distribution", {{"n", args.n}, {"method", method}}, {{"rows", rows}})),
         args.common.out);
    return 0;
  }
  std::ostringstream os;
  os << "S,probability_num,probability_den,probability_float\n";
  for (const auto& [s, p] : table.pmf) {
    os << s << ',' << p.numerator().get_str() << ',' << p.denominator().get_str() << ','
       << fmt(to_double(p)) << '\n';
  }
  emit(os.str(), args.common.out);
  return 0;
}

// ---------------------------------------------------------------- figures

struct FiguresArgs {
  Common common;
  std::string figure;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::uint64_t streams = 1;
};

const std::vector<std::uint64_t> kFig1Grid = {2, 3, 4, 5, 8, 10, 15, 20, 30, 50, 75, 100, 150, 200};
const std::vector<std::uint64_t> kFig2Grid = {5, 10, 20, 50, 100, 200};

int figure1(const FiguresArgs& args, const std::vector<std::uint64_t>& grid) {
  const double limit = limit_constants().mu_limit;
  ordered_json rows = ordered_json::array();
  std::ostringstream os;
  os << "n,exact_mu,simulated_mu,limit\n";
  for (const std::uint64_t n : grid) {
    const double exact = to_double(mu_n(n));
    const SimSummary s = run_simulation(
        {.n = n, .trials = args.trials, .master_seed = args.seed, .streams = std::min(args.streams, args.trials)},
        run_options());
    const BigInt cells = BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
    const double simulated = to_double(Rational(s.sum_S, cells * static_cast<unsigned long>(s.trials_done)));
    os << n << ',' << fmt(exact) << ',' << fmt(simulated) << ',' << fmt(limit) << '\n';
    rows.push_back({{"n", n}, {"exact_mu", exact}, {"simulated_mu", simulated}, {"limit", limit}});
  }
  if (args.common.json) {
    emit(dump(envelope("figures", {{"figure", "fig1"}, {"n_grid", grid}, {"trials", args.trials}, {"seed", args.seed}},
                       {{"rows", rows}})),
         args.common.out);
  } else {
    emit(os.str(), args.common.out);
  }
  return 0;
}

int figure2(const FiguresArgs& args, const std::vector<std::uint64_t>& grid) {
  const std::filesystem::path dir = args.common.out.empty() ? "." : args.common.out;
  std::filesystem::create_directories(dir);
  for (const std::uint64_t n : grid) {
    const SimSummary s = run_simulation(
        {.n = n, .trials = args.trials, .master_seed = args.seed, .streams = std::min(args.streams, args.trials)},
        run_options());
    const EmpiricalMoments em = empirical_moments(s);
    if (!em.variance || !(*em.variance > 0.0)) {
      throw std::invalid_argument("fig2: n = " + std::to_string(n) +
                                  " has zero sample variance; no Gaussian reference exists");
    }
    const double sd = std::sqrt(*em.variance);
    const std::uint64_t lo = s.histogram.begin()->first;
    const std::uint64_t hi = s.histogram.rbegin()->first;

    ordered_json rows = ordered_json::array();
    std::ostringstream os;
    os << "S,frequency,gaussian_density_at_S\n";
    for (std::uint64_t v = lo; v <= hi; ++v) {
      const auto it = s.histogram.find(v);
      const std::uint64_t count = it == s.histogram.end() ? 0 : it->second;
      const double freq = to_double(Rational(count, s.trials_done));
      const double density = normal_pdf(static_cast<double>(v), em.mean, sd);
      os << v << ',' << fmt(freq) << ',' << fmt(density) << '\n';
      rows.push_back({{"S", v}, {"frequency", freq}, {"gaussian_density_at_S", density}});
    }
    const std::string stem = "fig2_n" + std::to_string(n);
    if (args.common.json) {
      const GaussianComparison g = gaussian_comparison(s);
      ordered_json payload;
      payload["mean"] = em.mean;
      payload["sd"] = sd;
      payload["ks_statistic"] = g.ks_statistic;
      payload["skewness"] = g.skewness;
      payload["excess_kurtosis"] = g.excess_kurtosis;
      payload["degenerate_support"] = g.degenerate_support;
      payload["rows"] = std::move(rows);
      emit(dump(envelope("figures", {{"figure", "fig2"}, {"n", n}, {"trials", args.trials}, {"seed", args.seed}},
                         payload)),
           (dir / (stem + ".json")).string());
      std::cerr << (dir / (stem + ".json")).string() << '\n';
    } else {
      emit(os.str(), (dir / (stem + ".csv")).string());
      std::cerr << (dir / (stem + ".csv")).string() << '\n';
    }
  }
  return 0;
}

int cmd_figures(const FiguresArgs& args) {
  if (args.figure == "fig1") {
    return figure1(args, args.n_grid.empty() ? kFig1Grid : args.n_grid);
  }
  return figure2(args, args.n_grid.empty() ? kFig2Grid : args.n_grid);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated statistics of safe squares under random rook placements"};
  app.require_subcommand(1);

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact mu_n, E[S_n], Var(S_n), Var(S_n/n^2)");
  exact_cmd->add_option("--n", exact.n, "Board side")->required()->check(CLI::PositiveNumber);
  exact_cmd->add_flag("--float", exact.float_only, "Print binary64 values only");
  add_format_flags(exact_cmd, exact.common);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo histogram of S_n");
  sim_cmd->add_option("--n", sim.n, "Board side")->required()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--trials", sim.trials, "Number of random placements")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--streams", sim.streams, "Parallel partitions")->capture_default_str();
  add_format_flags(sim_cmd, sim.common);

  DistributionArgs dist;
  auto* dist_cmd = app.add_subcommand("distribution", "Exact probability mass function of S_n");
  dist_cmd->add_option("--n", dist.n, "Board side")->required()->check(CLI::PositiveNumber);
  dist_cmd->add_flag("--brute", dist.brute, "Enumerate every placement instead of inclusion-exclusion");
  dist_cmd->add_flag("--allow-large-enum", dist.allow_large_enum, "Permit enumeration at n = 6");
  add_format_flags(dist_cmd, dist.common);

  FiguresArgs fig;
  std::uint64_t fig_single_n = 0;
  auto* fig_cmd = app.add_subcommand("figures", "Data series for the mean-fraction curve and the histograms");
  fig_cmd->add_option("figure", fig.figure, "fig1 or fig2")->required()->check(CLI::IsMember({"fig1", "fig2"}));
  auto* grid_opt = fig_cmd->add_option("--n-grid", fig.n_grid, "Comma-separated board sides")->delimiter(',');
  fig_cmd->add_option("--n", fig_single_n, "Single board side")->excludes(grid_opt)->check(CLI::PositiveNumber);
  fig_cmd->add_option("--trials", fig.trials, "Placements per n")->capture_default_str();
  fig_cmd->add_option("--seed", fig.seed, "Master seed")->capture_default_str();
  fig_cmd->add_option("--streams", fig.streams, "Parallel partitions")->capture_default_str();
  add_format_flags(fig_cmd, fig.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (exact_cmd->parsed()) return cmd_exact(exact);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (dist_cmd->parsed()) return cmd_distribution(dist);
    if (fig_single_n != 0) fig.n_grid = {fig_single_n};
    for (const auto n : fig.n_grid) {
      if (n == 0) throw std::invalid_argument("--n-grid entries must be positive");
    }
    if (fig.trials == 0) throw std::invalid_argument("--trials must be positive");
    if (fig.streams == 0) throw std::invalid_argument("--streams must be positive");
    return cmd_figures(fig);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
