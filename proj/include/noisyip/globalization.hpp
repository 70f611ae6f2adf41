// Copyright (c) noisyip contributors

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "noisyip/problem.hpp"

namespace noisyip {

/// Ingredients of the linearized merit model at the current step.
struct MeritModel {
  double tau = 0.0;
  double f = 0.0;
  /// ‖c‖
  double c_norm = 0.0;
  /// ‖c + Jv‖
  double jv_residual = 0.0;
  /// gᵀd
  double gtd = 0.0;
  /// uᵀWu
  double uwu = 0.0;
};

/// φ = τf + ‖c‖.
double merit_value(double f, const Vector& c, double tau);

/// Δm = −τgᵀd + ‖c‖ − ‖c + Jv‖.
double model_reduction(const MeritModel& mm);

/**
 * τ_trial = (1−σ)(‖c‖ − ‖c+Jv‖)/(gᵀd + ½uᵀWu) when the denominator is
 * positive and +∞ otherwise.
 */
double trial_merit_parameter(const MeritModel& mm, double sigma);

/**
 * τ = τ_prev if τ_prev ≤ τ_trial, else min{(1−δ_τ)τ_prev, τ_trial}.
 *
 * Throws std::logic_error if the linearized infeasibility got worse while
 * the denominator is positive (cannot happen with a valid normal step).
 */
double update_tau(double tau_prev, const MeritModel& mm, double sigma,
                  double delta_tau);

/// Δm(τ) ≥ ½τuᵀWu + σ(‖c‖ − ‖c+Jv‖) up to `slack`.
bool sufficient_reduction_holds(const MeritModel& mm, double sigma,
                                double slack = 0.0);

/// Largest α in (0, 1] with α·dsᵢ ≥ −η_s for every i.
double fraction_to_boundary(const Vector& ds, double eta_s);

struct LineSearchOutcome {
  double alpha_max = 1.0;
  double alpha = 1.0;
  int j = 0;
  double phi_old = 0.0;
  double phi_new = 0.0;
  double eps_k = 0.0;
};

/// Thrown when backtracking needs more than j_max halvings.
class LineSearchFailure : public std::runtime_error {
 public:
  explicit LineSearchFailure(const std::string& what)
      : std::runtime_error{what} {}
};

/**
 * Merit value at the trial point z + α d̂ for backtrack index j. Throwing
 * std::domain_error (e.g. a nonpositive slack) rejects the trial.
 */
using TrialMerit = std::function<double(double alpha, int j)>;

/**
 * Returns the first j ≥ 0 such that α = (½)^j α_max satisfies
 *
 *   φ(z + αd̂) ≤ φ(z) − η_φ α Δm + (2 + ζ) ε_k.
 */
LineSearchOutcome armijo_backtrack(const TrialMerit& trial_merit,
                                   double phi_old, double dm,
                                   double alpha_max, double eta_phi,
                                   double zeta, double eps_k, int j_max = 60);

}  // namespace noisyip
