// Copyright (c) noisyip contributors

#pragma once

#include "noisyip/problem.hpp"

namespace noisyip {

/// Lower bound kept on every slack so that log(s) stays finite.
inline constexpr double kSlackFloor = 1e-12;

/// Primal-dual iterate of the barrier subproblem; z = (x, s).
struct BarrierState {
  Vector x;
  Vector s;
  Vector y;
  double tau = 0.1;
  double mu = 0.1;
  int k = 0;
};

/**
 * Barrier subproblem quantities in scaled form:
 *
 *   f = f₀ − μ Σ log sᵢ,   c = c_I + s,
 *   g = [g₀; −μe],         J = [J_I  S].
 */
struct ScaledSystem {
  double f = 0.0;
  Vector c;
  Vector g;
  Matrix J;

  int n() const { return static_cast<int>(J.cols() - J.rows()); }
  int q() const { return static_cast<int>(J.rows()); }
};

/// f₀ − μ Σ log sᵢ. Throws std::domain_error if some sᵢ ≤ 0.
double barrier_objective(double f0, const Vector& s, double mu);

/// Throws std::domain_error if some sᵢ ≤ 0 or μ ≤ 0.
ScaledSystem assemble(double f0, const Vector& g0, const Vector& c_i,
                      const Matrix& j_i, const Vector& s, double mu);

inline ScaledSystem assemble(const NoisyEvaluation& eval, const Vector& s,
                             double mu) {
  return assemble(eval.f0, eval.g0, eval.c_i, eval.j_i, s, mu);
}

/// s = max{1, −c_I(x₀), s_min} componentwise.
Vector init_slacks(const Vector& c_i0, double s_min = kSlackFloor);

/// Evaluates c_I(x₀) through the oracle with the iteration-0 key.
Vector init_slacks(const NoisyOracle& oracle, const Vector& x0,
                   double s_min = kSlackFloor);

/// s₊ = max{s_cand, −c_I(x₊), s_min} componentwise.
Vector slack_reset(const Vector& s_cand, const Vector& c_i_next,
                   double s_min = kSlackFloor);

}  // namespace noisyip
