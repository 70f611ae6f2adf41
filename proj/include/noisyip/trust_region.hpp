// Copyright (c) noisyip contributors

#pragma once

#include "noisyip/barrier.hpp"
#include "noisyip/problem.hpp"

namespace noisyip {

struct TrustRegionSolution {
  Vector t;
  /// Multiplier of the ball constraint; +∞ when delta = 0 and b ≠ 0.
  double lambda = 0.0;
  bool on_boundary = false;
  int iterations = 0;
};

/**
 * Moré–Sorensen solve of
 *
 *   min ½tᵀHt + bᵀt  s.t. ‖t‖ ≤ delta
 *
 * for symmetric positive semidefinite H. The returned pair satisfies
 * (H + λI)t = −b, λ ≥ 0 and λ(‖t‖ − delta) ≈ 0. When the unconstrained
 * minimizers reach into the ball, the least-norm one (−H⁺b) is returned.
 *
 * Throws std::invalid_argument for delta < 0 or nonfinite input.
 */
TrustRegionSolution solve_trust_region(const Matrix& H, const Vector& b,
                                       double delta, double tol = 1e-12);

/// Normal step v and its diagnostics.
struct TrustRegionResult {
  Vector v;
  bool on_boundary = false;
  double lambda = 0.0;
  /// ‖c + Jv‖
  double predicted_residual = 0.0;
  /// ω‖Jᵀc‖
  double radius = 0.0;
};

/**
 * Normal step: minimizes ½‖c + Jv‖² over range(Jᵀ) within the ball of
 * radius ω‖Jᵀc‖, by running solve_trust_region on (JᵀJ, Jᵀc). The
 * least-norm convention keeps v in range(Jᵀ).
 */
TrustRegionResult normal_step(const ScaledSystem& sys, double omega,
                              double tol_tr = 1e-12);

/**
 * Reduction ‖c‖ − ‖c + α̂Jv̂‖ achieved by the Cauchy point along v̂ = −Jᵀc,
 * with α̂ the minimizer of ½‖c + αJv̂‖² over [0, ω].
 */
double cauchy_reduction(const ScaledSystem& sys, double omega);

}  // namespace noisyip
