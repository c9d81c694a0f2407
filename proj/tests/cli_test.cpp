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

// Runs the rooksafe binary as a subprocess and checks its outputs.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "rooksafe/rooksafe.hpp"

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(ROOKSAFE_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rooksafe_cli_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(cli_exact, three_by_three) {
  const Result r = run("exact --n 3");
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_GE(rows.size(), 7U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"quantity", "exact", "float"}));
  EXPECT_EQ(rows[1][0], "mu_n");
  EXPECT_EQ(rows[1][1], "1/21");
  EXPECT_EQ(rows[2][1], "3/7");
  EXPECT_EQ(rows[5][0], "var_S");
  EXPECT_EQ(rows[5][1], "12/49");
  EXPECT_EQ(std::stod(rows[2][2]), 3.0 / 7.0);
}

TEST(cli_exact, one_by_one) {
  const Result r = run("exact --n 1 --json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"mu_n", "expected_safe", "var_S", "var_fraction"}) {
    EXPECT_EQ(j["payload"][key]["exact"], "0/1") << key;
  }
  EXPECT_EQ(j["payload"]["prob_no_safe_square"]["exact"], "1/1");
}

TEST(cli_exact, float_output_at_hundred) {
  const Result r = run("exact --n 100 --float");
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"quantity", "float"}));
  const double mu = std::stod(rows[1][1]);
  EXPECT_NEAR(mu, 0.1326, 1e-4);
  EXPECT_LE(std::abs(mu - 0.1353352832366127), 5.0 / 100);
}

TEST(cli_exact, invalid_n) {
  EXPECT_EQ(run("exact --n 0").exit_code, 2);
  EXPECT_EQ(run("exact --n -4").exit_code, 2);
  EXPECT_EQ(run("exact").exit_code, 2);
  EXPECT_EQ(run("exact --n 3 --json --csv").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
}

TEST(cli_simulate, mean_near_exact) {
  const Result r = run("simulate --n 3 --trials 84000 --seed 1 --json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "simulate");
  const double se = std::sqrt((12.0 / 49.0) / 84000);
  EXPECT_NEAR(j["payload"]["mean"].get<double>(), 3.0 / 7.0, 5 * se);
  EXPECT_EQ(j["payload"]["trials"], 84000);
}

TEST(cli_simulate, streams_do_not_change_output) {
  for (const char* fmt : {"--csv", "--json"}) {
    const Result one = run(std::string("simulate --n 100 --trials 10000 --seed 7 --streams 1 ") + fmt);
    const Result eight = run(std::string("simulate --n 100 --trials 10000 --seed 7 --streams 8 ") + fmt);
    ASSERT_EQ(one.exit_code, 0);
    EXPECT_EQ(one.out, eight.out) << fmt;
  }
}

TEST(cli_simulate, degenerate_two_by_two) {
  const Result r = run("simulate --n 2 --trials 1000");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "S,count\n0,1000\n");
}

TEST(cli_simulate, invalid_config) {
  EXPECT_EQ(run("simulate --n 3 --trials 0").exit_code, 2);
  EXPECT_EQ(run("simulate --n 3 --trials 5 --streams 6").exit_code, 2);
  EXPECT_EQ(run("simulate --n 0").exit_code, 2);
}

TEST(cli_simulate, thread_cap_environment) {
  const std::string cmd = std::string("ROOKSAFE_THREADS=bogus ") + ROOKSAFE_CLI_PATH +
                          " simulate --n 5 --trials 10 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
  const std::string ok = std::string("ROOKSAFE_THREADS=2 ") + ROOKSAFE_CLI_PATH +
                         " simulate --n 5 --trials 10 > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(ok.c_str())), 0);
}

TEST(cli_distribution, three_by_three) {
  const Result r = run("distribution --n 3");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out,
            "S,probability_num,probability_den,probability_float\n"
            "0,4,7,0.5714285714285714\n"
            "1,3,7,0.42857142857142855\n");
}

TEST(cli_distribution, brute_force_matches_inclusion_exclusion) {
  const Result brute = run("distribution --n 5 --brute");
  const Result ie = run("distribution --n 5");
  ASSERT_EQ(brute.exit_code, 0);
  EXPECT_EQ(brute.out, ie.out);
}

TEST(cli_distribution, single_row_for_one) {
  EXPECT_EQ(run("distribution --n 1").out, "S,probability_num,probability_den,probability_float\n0,1,1,1\n");
}

TEST(cli_distribution, caps) {
  EXPECT_EQ(run("distribution --n 6 --brute").exit_code, 3);
  EXPECT_EQ(run("distribution --n 7 --brute --allow-large-enum").exit_code, 3);
  EXPECT_EQ(run("distribution --n 65").exit_code, 3);
  EXPECT_EQ(run("distribution --n 6 --brute --allow-large-enum").out, run("distribution --n 6").out);
  EXPECT_EQ(run("distribution --n 0").exit_code, 2);
}

TEST(cli_distribution, json_schema) {
  const Result r = run("distribution --n 4 --json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["parameters"]["n"], 4);
  rooksafe::Rational total;
  for (const auto& row : j["payload"]["rows"]) {
    total += rooksafe::Rational(rooksafe::BigInt(row["probability_num"].get<std::string>()),
                                rooksafe::BigInt(row["probability_den"].get<std::string>()));
  }
  EXPECT_EQ(total, rooksafe::Rational(1));
}

TEST(cli_figures, fig1_columns) {
  const Result r = run("figures fig1 --trials 2000");
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "exact_mu", "simulated_mu", "limit"}));
  ASSERT_EQ(rows.size(), 15U);  // header + default grid of 14
  bool saw_four = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][3]), 0.1353352832, 1e-10);
    EXPECT_EQ(rows[i][3], rows[1][3]);
    if (rows[i][0] == "4") {
      saw_four = true;
      EXPECT_EQ(std::stod(rows[i][1]), 9.0 / 130.0);
    }
  }
  EXPECT_TRUE(saw_four);
}

TEST(cli_figures, fig1_custom_grid_json) {
  const Result r = run("figures fig1 --n-grid 3,7 --trials 500 --json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  ASSERT_EQ(j["payload"]["rows"].size(), 2U);
  EXPECT_EQ(j["payload"]["rows"][0]["n"], 3);
}

TEST(cli_figures, fig2_reproducible) {
  const auto a = scratch_dir("fig2a");
  const auto b = scratch_dir("fig2b");
  ASSERT_EQ(run("figures fig2 --n 100 --trials 10000 --seed 2 --out " + a.string()).exit_code, 0);
  ASSERT_EQ(run("figures fig2 --n 100 --trials 10000 --seed 2 --streams 4 --out " + b.string()).exit_code, 0);
  const std::string first = slurp(a / "fig2_n100.csv");
  EXPECT_EQ(first, slurp(b / "fig2_n100.csv"));
  const auto rows = parse_csv(first);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"S", "frequency", "gaussian_density_at_S"}));
  double mass = 0;
  double density = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    mass += std::stod(rows[i][1]);
    density += std::stod(rows[i][2]);
  }
  EXPECT_NEAR(mass, 1.0, 1e-9);
  EXPECT_NEAR(density, 1.0, 0.01);  // unit-spaced samples of the reference density
}

TEST(cli_figures, fig2_json_reports_gaussian_diagnostics) {
  const auto dir = scratch_dir("fig2json");
  ASSERT_EQ(run("figures fig2 --n-grid 10,20 --trials 3000 --json --out " + dir.string()).exit_code, 0);
  for (const char* name : {"fig2_n10.json", "fig2_n20.json"}) {
    const auto j = nlohmann::json::parse(slurp(dir / name));
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_TRUE(j["payload"].contains("ks_statistic"));
  }
}

TEST(cli_figures, errors) {
  EXPECT_EQ(run("figures fig3").exit_code, 2);
  EXPECT_EQ(run("figures").exit_code, 2);
  EXPECT_EQ(run("figures fig2 --n 2 --trials 100 --out " + scratch_dir("fig2err").string()).exit_code, 2);
}
