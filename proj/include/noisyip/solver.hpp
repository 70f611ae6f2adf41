// Copyright (c) noisyip contributors

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "noisyip/barrier.hpp"
#include "noisyip/problem.hpp"

namespace noisyip {

struct ContinuationConfig {
  bool enabled = false;
  double kappa_mu = 0.2;
  double theta_mu = 1.5;
  double mu_min = 1e-6;
  /// Floor (κ_ε μ)² on the reduction threshold; keeps noise-free runs finite.
  double kappa_eps = 1.0;
};

struct SolverConfig {
  double mu = 0.1;
  /// τ₋₁
  double tau_init = 0.1;
  double omega = 1e3;
  double sigma = 0.1;
  double delta_tau = 1e-4;
  /// Defaults to max{0.99, 1 − μ}.
  std::optional<double> eta_s;
  double eta_phi = 1e-8;
  double zeta = 0.1;

  /// Noise bounds known to the solver. ε_f and ε_c enter ε_k; all four
  /// enter the continuation threshold.
  double eps_f = 0.0;
  double eps_c = 0.0;
  double eps_g = 0.0;
  double eps_J = 0.0;
  /// Floor on ε_k so the relaxed Armijo test stays satisfiable when ε = 0.
  double eps_k_floor = 1e-16;

  int max_iter = 2000;
  /// Seconds.
  double time_limit = 3600.0;
  /// 0 disables both termination tests.
  double tol_term = 0.0;

  double kappa_sigma = 1e10;
  /// The Lagrangian Hessian is evaluated at clamp(y, 0, cap).
  double hessian_multiplier_cap = 1e6;
  double pd_tol = 1e-10;
  double tol_tr = 1e-12;
  int j_max = 60;
  bool check_invariants = true;

  ContinuationConfig continuation;

  double eta_s_value() const;
  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;

  /// Defaults with the noise bounds copied from `noise`.
  static SolverConfig with_noise(const NoiseSpec& noise, double mu);
};

enum class SolveStatus {
  kInfeasibleStationary,
  kStationary,
  kMaxIter,
  kTimeLimit,
  kFailure,
  /// Continuation only: Δm fell below the reduction threshold.
  kBarrierThreshold,
};

std::string status_name(SolveStatus status);

/// Bits of IterationRecord::violations.
enum Violation : std::uint32_t {
  kSlackPositive = 1u << 0,
  kResetFeasible = 1u << 1,
  kSufficientReduction = 1u << 2,
  kFractionToBoundary = 1u << 3,
  kArmijo = 1u << 4,
  kTauMonotone = 1u << 5,
  kCauchyDecrease = 1u << 6,
  kKktResidual = 1u << 7,
  kLinearizedFeasibility = 1u << 8,
  kTangentialCurvature = 1u << 9,
  kNormalStepRadius = 1u << 10,
  kResetMerit = 1u << 11,
};

std::string describe_violations(std::uint32_t mask);

struct IterationRecord {
  int k = 0;
  double tau = 0.0;
  double alpha_max = 0.0;
  double alpha = 0.0;
  int j = 0;
  double dm = 0.0;
  double merit_noisy = 0.0;
  /// max(‖g + Jᵀy₊‖, ‖c‖)
  double stat_kkt_noisy = 0.0;
  /// ‖Jᵀc‖
  double stat_infeas_noisy = 0.0;
  /// Same measures from noiseless evaluations; NaN when no diagnostics hook
  /// is installed.
  double stat_kkt_true = 0.0;
  double stat_infeas_true = 0.0;
  double shift = 0.0;
  double mu = 0.0;

  /// Set on the record written by a successful termination test; such a
  /// record has no step.
  bool terminal = false;

  double norm_c = 0.0;
  double norm_jv_residual = 0.0;
  double norm_v = 0.0;
  double norm_d = 0.0;
  double norm_u = 0.0;
  double norm_y_next = 0.0;
  double norm_g = 0.0;
  double norm_J = 0.0;
  double gtd = 0.0;
  double uwu = 0.0;
  double tau_trial = 0.0;
  double eps_k = 0.0;
  double phi_trial = 0.0;
  double kkt_residual_stationarity = 0.0;
  double kkt_residual_feasibility = 0.0;
  double linearized_gap = 0.0;

  /// Realized evaluation errors (filled by the diagnostics hook).
  double err_f = 0.0;
  double err_c = 0.0;
  double err_g = 0.0;
  double err_J = 0.0;

  std::uint32_t violations = 0;
};

/// Data handed to the diagnostics hook at every recorded iteration.
struct DiagnosticsInput {
  const NoisyOracle& oracle;
  const SolverConfig& config;
  const Vector& x;
  const Vector& s;
  double mu;
  /// Noisy evaluation used by the iteration.
  const NoisyEvaluation& eval;
  /// W after inertia correction (or as built, on a terminal record).
  const Matrix& W;
};

using DiagnosticsHook =
    std::function<void(const DiagnosticsInput&, IterationRecord&)>;

struct SolveResult {
  SolveStatus status = SolveStatus::kMaxIter;
  BarrierState final_state;
  std::vector<IterationRecord> trace;
  double wall_time = 0.0;
  std::string message;
  /// Noisy f₀ and c_I at final_state.x, as last seen by the solver.
  NoisyValues final_values;
  /// Inertia-correction shift used on the last iteration.
  double last_shift = 0.0;

  int iterations() const;
  int violation_count() const;
};

/// x₀, s₀ = max{1, −c_I(x₀)}, y₀ = μS₀⁻¹e, τ = τ₋₁, k = 0.
BarrierState initial_state(const NoisyOracle& oracle,
                           const SolverConfig& config);

/**
 * Runs the line-search interior-point iteration on the barrier subproblem
 * with parameter config.mu from `start`. Iteration counters (and so the
 * noise keys) continue from start.k.
 *
 * With config.continuation.enabled the solve also stops (status
 * kBarrierThreshold) once should_reduce_mu() fires.
 */
SolveResult solve_barrier_subproblem(const NoisyOracle& oracle,
                                     const SolverConfig& config,
                                     const BarrierState& start,
                                     const DiagnosticsHook& hook = {});

/**
 * Threshold on Δm below which the barrier subproblem counts as solved to
 * the accuracy the noise allows. Built from the last record and running
 * maxima over `trace`; see continuation.cpp for the recipe.
 */
double reduction_threshold(const std::vector<IterationRecord>& trace,
                           const SolverConfig& config);

bool should_reduce_mu(const std::vector<IterationRecord>& trace,
                      const SolverConfig& config);

/// μ₊ = max{μ_min, min{κ_μ μ, μ^θ_μ}}.
double next_mu(double mu, const ContinuationConfig& config);

/**
 * Solves barrier subproblems for a decreasing sequence of μ, starting from
 * config.mu and stopping after the μ_min subproblem or when the total
 * iteration budget config.max_iter is spent.
 */
std::vector<SolveResult> continuation_loop(const NoisyOracle& oracle,
                                           const SolverConfig& config,
                                           const DiagnosticsHook& hook = {});

}  // namespace noisyip
