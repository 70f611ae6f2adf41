// Copyright (c) noisyip contributors

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisyip/harness.hpp"
#include "noisyip/problem_config.hpp"
#include "noisyip/solver.hpp"
#include "noisyip/suite.hpp"
#include "noisyip/trace_io.hpp"

namespace {

using namespace noisyip;

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss{text};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    std::istringstream is{item};
    T value;
    if (!(is >> value) || !is.eof()) {
      throw CLI::ValidationError("bad list entry: " + item);
    }
    out.push_back(value);
  }
  if (out.empty()) {
    throw CLI::ValidationError("empty list: " + text);
  }
  return out;
}

struct SolveOptions {
  std::string problem;
  std::string config_path;
  double mu = 0.1;
  double eps_f = 0.0;
  double eps_c = 0.0;
  std::uint64_t seed = 0;
  int max_iter = 2000;
  bool continuation = false;
  double mu_min = 1e-6;
  double tol_term = 0.0;
  std::string keying = "per_iteration";
  bool no_scale = false;
  std::string out;
  std::string summary;
};

int run_solve(const SolveOptions& opt) {
  ProblemConfig pc;
  if (!opt.config_path.empty()) {
    pc = load_problem_config(opt.config_path);
  } else {
    if (opt.problem.empty()) {
      throw CLI::ValidationError("--problem or --config is required");
    }
    pc.problem = opt.problem;
    // ε_f and ε_c are independent here; derivative bounds follow √ε_f.
    pc.noise = NoiseSpec::from_level(opt.eps_f, opt.seed);
    pc.noise.eps_c = opt.eps_c;
    pc.noise.keying = parse_keying(opt.keying);
    pc.scaling = !opt.no_scale;
  }

  TrueProblem tp = make_problem(pc.problem);
  if (pc.scaling) {
    tp = scale_problem(tp);
  }
  const NoisyOracle oracle{std::move(tp), pc.noise};
  SolverConfig config = SolverConfig::with_noise(pc.noise, opt.mu);
  config.max_iter = opt.max_iter;
  config.tol_term = opt.tol_term;
  const DiagnosticsHook hook = true_measures_hook();

  SolveResult result;
  std::vector<IterationRecord> trace;
  if (opt.continuation) {
    config.continuation.enabled = true;
    config.continuation.mu_min = std::min(opt.mu_min, opt.mu);
    const auto parts = continuation_loop(oracle, config, hook);
    trace = merged_trace(parts);
    result = parts.back();
    result.trace = trace;
  } else {
    result = solve_barrier_subproblem(oracle, config,
                                      initial_state(oracle, config), hook);
    trace = result.trace;
  }

  if (!opt.out.empty()) {
    save_trace_csv(opt.out, trace);
  }
  const std::string summary = summary_json(result, pc.problem);
  if (!opt.summary.empty()) {
    std::ofstream{opt.summary} << summary << '\n';
  }
  std::cout << summary << '\n';
  return result.status == SolveStatus::kFailure ? 1 : 0;
}

struct ExperimentOptions {
  std::string suite_name = "default";
  std::string mus = "0.1,1e-4";
  std::string noise = "1e-2,1e-6";
  std::string seeds = "0";
  std::string out;
  int jobs = 1;
  int max_iter = 2000;
};

int run_experiment(const ExperimentOptions& opt) {
  ExperimentGrid grid;
  grid.problems = suite(opt.suite_name);
  grid.mus = parse_list<double>(opt.mus);
  grid.noise_levels = parse_list<double>(opt.noise);
  grid.seeds = parse_list<std::uint64_t>(opt.seeds);
  grid.max_iter = opt.max_iter;
  grid.out_dir = opt.out;
  const auto summaries = run_grid(grid, opt.jobs);

  std::printf("%-20s %8s %8s %5s %-22s %6s %12s %12s\n", "problem", "mu",
              "eps_f", "seed", "status", "iters", "geo_kkt_true",
              "geo_inf_true");
  int failures = 0;
  for (const auto& s : summaries) {
    std::printf("%-20s %8.1e %8.1e %5llu %-22s %6d %12.3e %12.3e\n",
                s.problem.c_str(), s.mu, s.eps_f,
                static_cast<unsigned long long>(s.seed), s.status.c_str(),
                s.iters, s.geo_kkt_true, s.geo_infeas_true);
    if (s.status == "Failure") {
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-tolerant interior-point solver"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Solve one problem");
  solve->add_option("--problem", solve_opt.problem, "Registered problem name");
  solve->add_option("--config", solve_opt.config_path,
                    "JSON problem configuration (overrides noise flags)");
  solve->add_option("--mu", solve_opt.mu, "Barrier parameter");
  solve->add_option("--eps-f", solve_opt.eps_f, "Objective noise bound");
  solve->add_option("--eps-c", solve_opt.eps_c, "Constraint noise bound");
  solve->add_option("--seed", solve_opt.seed, "Noise seed");
  solve->add_option("--max-iter", solve_opt.max_iter, "Iteration budget");
  solve->add_flag("--continuation", solve_opt.continuation,
                  "Decrease mu across subproblems");
  solve->add_option("--mu-min", solve_opt.mu_min, "Smallest mu");
  solve->add_option("--tol-term", solve_opt.tol_term,
                    "Termination tolerance (0 disables)");
  solve->add_option("--keying", solve_opt.keying,
                    "per_iteration or hash_of_point");
  solve->add_flag("--no-scale", solve_opt.no_scale, "Skip problem scaling");
  solve->add_option("--out", solve_opt.out, "Trace CSV path");
  solve->add_option("--summary", solve_opt.summary, "Summary JSON path");

  ExperimentOptions exp_opt;
  auto* experiment = app.add_subcommand("experiment", "Run a grid");
  experiment->add_option("--suite", exp_opt.suite_name,
                         "default, convex, nondegenerate or a problem name");
  experiment->add_option("--mus", exp_opt.mus, "Comma-separated mu values");
  experiment->add_option("--noise", exp_opt.noise,
                         "Comma-separated eps_f = eps_c values");
  experiment->add_option("--seeds", exp_opt.seeds, "Comma-separated seeds");
  experiment->add_option("--out", exp_opt.out, "Output directory")->required();
  experiment->add_option("--jobs", exp_opt.jobs, "Worker threads");
  experiment->add_option("--max-iter", exp_opt.max_iter, "Iteration budget");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) {
      return run_solve(solve_opt);
    }
    return run_experiment(exp_opt);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
