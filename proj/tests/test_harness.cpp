// Copyright (c) noisyip contributors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "noisyip/harness.hpp"
#include "noisyip/suite.hpp"

using namespace noisyip;
using Catch::Approx;

namespace fs = std::filesystem;

namespace {

std::vector<RunSummary> with_kkt_true(const std::vector<double>& values) {
  std::vector<RunSummary> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i].geo_kkt_true = values[i];
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in{p};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("geometric_mean_tail examples") {
  REQUIRE(geometric_mean_tail({0.3, 0.3, 0.3}) == Approx(0.3));
  REQUIRE(geometric_mean_tail({5.0, 1e-2, 1e-4}, 2) == Approx(1e-3));
  REQUIRE(geometric_mean_tail({1, 2, 4, 8, 16}, 10) == Approx(4.0));
  REQUIRE(geometric_mean_tail({0.0}) == Approx(1e-300));
  REQUIRE(std::isnan(geometric_mean_tail({})));
}

TEST_CASE("profile examples") {
  auto table = profile(with_kkt_true({1e-5, 1e-5}), ProfileMeasure::kKktTrue,
                       {1e-6, 1e-4});
  REQUIRE(table[0].second == 0.0);
  REQUIRE(table[1].second == 100.0);

  REQUIRE(profile(with_kkt_true({1.0}), ProfileMeasure::kKktTrue, {}).empty());

  table = profile(with_kkt_true({1e-2, 1e-4, 1e-6}), ProfileMeasure::kKktTrue,
                  {1e-5, 1e-3, 1e-1});
  REQUIRE(table[0].second == Approx(100.0 / 3));
  REQUIRE(table[1].second == Approx(200.0 / 3));
  REQUIRE(table[2].second == 100.0);

  table = profile(with_kkt_true({std::nan(""), 1.0}),
                  ProfileMeasure::kKktTrue, {1e100});
  REQUIRE(table[0].second == 50.0);
}

TEST_CASE("profile is monotone in the threshold") {
  Rng rng{1};
  std::uniform_real_distribution<double> unif(-9.0, 3.0);
  std::vector<double> values(40);
  for (double& v : values) {
    v = std::pow(10.0, unif(rng));
  }
  const auto table = profile(with_kkt_true(values), ProfileMeasure::kKktTrue,
                             default_thresholds());
  for (std::size_t i = 1; i < table.size(); ++i) {
    REQUIRE(table[i].second >= table[i - 1].second);
  }
}

TEST_CASE("profile measure names") {
  for (const std::string name :
       {"kkt_noisy", "infeas_noisy", "kkt_true", "infeas_true"}) {
    REQUIRE(profile_measure_name(parse_profile_measure(name)) == name);
  }
  REQUIRE_THROWS_AS(parse_profile_measure("bogus"), std::invalid_argument);
}

TEST_CASE("default thresholds span 1e-8 to 1e2") {
  const auto t = default_thresholds();
  REQUIRE(t.size() == 11);
  REQUIRE(t.front() == Approx(1e-8));
  REQUIRE(t.back() == Approx(1e2));
}

TEST_CASE("grid cardinality and outputs") {
  const fs::path dir = fs::temp_directory_path() / "noisyip_grid_test";
  fs::remove_all(dir);
  ExperimentGrid grid;
  grid.problems = {"hs35"};
  grid.mus = {0.1};
  grid.noise_levels = {1e-2};
  grid.max_iter = 30;
  grid.out_dir = dir.string();
  const auto summaries = run_grid(grid, 1);
  REQUIRE(summaries.size() == 1);
  REQUIRE(summaries[0].iters == 30);
  REQUIRE(summaries[0].noise_bounds_ok);
  int traces = 0;
  for (const auto& e : fs::directory_iterator(dir / "traces")) {
    traces += e.path().extension() == ".csv" ? 1 : 0;
  }
  REQUIRE(traces == 1);
  REQUIRE(fs::exists(dir / "summaries" /
                     (cell_stem("hs35", 0.1, 1e-2, 0) + ".json")));
  REQUIRE(fs::exists(dir / "profiles"));
  fs::remove_all(dir);
}

TEST_CASE("default grid has 48 cells") {
  ExperimentGrid grid;
  grid.problems = suite("default");
  grid.max_iter = 1;
  REQUIRE(run_grid(grid, 2).size() == 48);
}

TEST_CASE("grid results do not depend on parallelism") {
  const fs::path a = fs::temp_directory_path() / "noisyip_par_a";
  const fs::path b = fs::temp_directory_path() / "noisyip_par_b";
  fs::remove_all(a);
  fs::remove_all(b);
  ExperimentGrid grid;
  grid.problems = {"lp2", "hs43", "rosenbrock_disk"};
  grid.seeds = {0, 1};
  grid.max_iter = 60;
  grid.out_dir = a.string();
  const auto s1 = run_grid(grid, 1);
  grid.out_dir = b.string();
  const auto s8 = run_grid(grid, 8);
  REQUIRE(s1.size() == s8.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    REQUIRE(s1[i].problem == s8[i].problem);
    REQUIRE(s1[i].geo_kkt_true == s8[i].geo_kkt_true);
    const fs::path rel = fs::path{s1[i].trace_file}.filename();
    REQUIRE(slurp(a / "traces" / rel) == slurp(b / "traces" / rel));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("true-measure hook fills noiseless diagnostics") {
  ExperimentGrid grid;
  const auto cell = run_cell("hs76", 0.1, 1e-6, 0, grid);
  for (const auto& r : cell.result.trace) {
    REQUIRE(std::isfinite(r.stat_kkt_true));
    REQUIRE(std::isfinite(r.stat_infeas_true));
  }
  REQUIRE(cell.summary.max_err_f <= 1e-6);
  REQUIRE(cell.summary.max_err_g <= 1e-3 * (1 + 1e-12));
}

TEST_CASE("run summary json") {
  RunSummary s;
  s.problem = "lp2";
  s.status = "MaxIter";
  s.geo_kkt_true = std::nan("");
  const std::string json = run_summary_json(s);
  REQUIRE(json.find("\"problem\": \"lp2\"") != std::string::npos);
  REQUIRE(json.find("null") != std::string::npos);
}
