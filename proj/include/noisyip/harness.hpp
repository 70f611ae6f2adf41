// Copyright (c) noisyip contributors

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "noisyip/problem.hpp"
#include "noisyip/solver.hpp"

namespace noisyip {

struct ExperimentGrid {
  std::vector<std::string> problems;
  std::vector<double> mus{1e-1, 1e-4};
  /// ε_f = ε_c; ε_g = ε_J = ε_H = √ε_f.
  std::vector<double> noise_levels{1e-2, 1e-6};
  std::vector<std::uint64_t> seeds{0};
  int max_iter = 2000;
  double time_limit = 3600.0;
  NoiseKeying keying = NoiseKeying::kPerIteration;
  bool scaling = true;
  double tol_term = 0.0;
  bool continuation = false;
  /// When nonempty, traces, summaries and profiles are written here.
  std::string out_dir;
};

struct RunSummary {
  std::string problem;
  double mu = 0.0;
  double eps_f = 0.0;
  std::uint64_t seed = 0;
  double geo_kkt_noisy = 0.0;
  double geo_infeas_noisy = 0.0;
  double geo_kkt_true = 0.0;
  double geo_infeas_true = 0.0;
  std::string status;
  int iters = 0;
  double wall_time = 0.0;
  /// Iterations with at least one invariant violation.
  int violations = 0;
  std::uint32_t violation_mask = 0;
  /// Largest realized errors over the run.
  double max_err_f = 0.0;
  double max_err_c = 0.0;
  double max_err_g = 0.0;
  double max_err_J = 0.0;
  bool noise_bounds_ok = true;
  std::string message;
  std::string trace_file;
};

/// Output of one grid cell.
struct CellResult {
  RunSummary summary;
  SolveResult result;
};

/**
 * Hook that fills stat_kkt_true, stat_infeas_true and the realized errors
 * from noiseless evaluations at the recorded iterate. The true multipliers
 * come from the same KKT system with the true g, J and the W the solver
 * used.
 */
DiagnosticsHook true_measures_hook();

/// exp(mean(log(max(v, 1e-300)))) over the last min(window, size) values.
/// Returns NaN for an empty input.
double geometric_mean_tail(const std::vector<double>& values,
                           std::size_t window = 10);

/// Runs one (problem, μ, ε, seed) cell on the scaled problem.
CellResult run_cell(const std::string& problem, double mu, double eps_f,
                    std::uint64_t seed, const ExperimentGrid& grid);

/**
 * Runs every cell of the grid with `parallelism` worker threads. Results are
 * ordered problem-major, then μ, ε, seed, whatever the parallelism.
 */
std::vector<RunSummary> run_grid(const ExperimentGrid& grid,
                                 int parallelism = 1);

enum class ProfileMeasure { kKktNoisy, kInfeasNoisy, kKktTrue, kInfeasTrue };

/// "kkt_noisy", "infeas_noisy", "kkt_true" or "infeas_true"; throws
/// std::invalid_argument otherwise.
ProfileMeasure parse_profile_measure(const std::string& name);
std::string profile_measure_name(ProfileMeasure measure);
double measure_value(const RunSummary& summary, ProfileMeasure measure);

/// (threshold, percentage of summaries with measure ≤ threshold).
std::vector<std::pair<double, double>> profile(
    const std::vector<RunSummary>& summaries, ProfileMeasure measure,
    const std::vector<double>& thresholds);

/// 10⁻⁸, 10⁻⁷, …, 10².
std::vector<double> default_thresholds();

std::string profile_csv(const std::vector<std::pair<double, double>>& table);

std::string run_summary_json(const RunSummary& summary);

/// File stem "<problem>_mu<μ>_eps<ε>_seed<seed>".
std::string cell_stem(const std::string& problem, double mu, double eps_f,
                      std::uint64_t seed);

}  // namespace noisyip
