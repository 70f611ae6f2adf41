// Copyright (c) noisyip contributors

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace noisyip {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/**
 * Factors applied by scale_problem(). The objective is multiplied by
 * `objective` and constraint row i by `constraints(i)`.
 */
struct ScalingInfo {
  double objective = 1.0;
  Vector constraints;
  /// Rows whose gradient at x₀ was not finite; their factor stays 1.
  std::vector<int> failed_rows;
  bool objective_failed = false;

  bool applied() const;
};

/**
 * Noiseless problem
 *
 *   min f̄₀(x)  s.t.  c̄_I(x) ≤ 0,
 *
 * with analytic first derivatives. The Lagrangian Hessian is optional; when
 * it is empty the oracle serves a zero matrix.
 */
struct TrueProblem {
  std::string name;
  int n = 0;
  int q = 0;

  std::function<double(const Vector& x)> f0;
  std::function<Vector(const Vector& x)> g0;
  std::function<Vector(const Vector& x)> c_i;
  /// q×n constraint Jacobian.
  std::function<Matrix(const Vector& x)> j_i;
  /// ∇²f̄₀(x) + Σᵢ yᵢ∇²c̄ᵢ(x).
  std::function<Matrix(const Vector& x, const Vector& y)> lagrangian_hessian;

  Vector x0;
  ScalingInfo scaling;

  bool has_hessian() const { return static_cast<bool>(lagrangian_hessian); }
};

enum class NoiseKeying {
  /// Draws depend on (seed, iteration, trial slot).
  kPerIteration,
  /// Draws depend on (seed, bit pattern of x); repeated queries agree.
  kHashOfPoint,
};

/// Known bounds on the evaluation errors.
struct NoiseSpec {
  double eps_f = 0.0;
  double eps_c = 0.0;
  double eps_g = 0.0;
  double eps_J = 0.0;
  double eps_H = 0.0;
  std::uint64_t seed = 0;
  NoiseKeying keying = NoiseKeying::kPerIteration;

  /// ε_f = ε_c = level and ε_g = ε_J = ε_H = √level.
  static NoiseSpec from_level(double level, std::uint64_t seed);

  bool is_zero() const;
  /// Throws std::invalid_argument on negative or nonfinite bounds.
  void validate() const;
};

/**
 * Identifies one evaluation event. Under per-iteration keying the pair
 * (k, slot) selects the noise draw; slot 0 is the iterate itself and slot
 * j + 1 is the j-th line-search trial point of iteration k.
 */
struct EvalKey {
  std::int64_t k = 0;
  int slot = 0;
};

struct NoisyEvaluation {
  double f0 = 0.0;
  Vector g0;
  Vector c_i;
  Matrix j_i;
  /// Noisy Lagrangian Hessian; empty when not requested.
  Matrix hessian;
};

/// Objective and constraint values only (used at line-search trial points).
struct NoisyValues {
  double f0 = 0.0;
  Vector c_i;
};

/**
 * Returns a point drawn uniformly from the ℓ₂ ball of the given radius in
 * R^dim: a uniformly distributed direction scaled by radius·U^(1/dim).
 */
Vector sample_ball(double radius, int dim, Rng& rng);

/**
 * Serves noisy evaluations of a TrueProblem. The only mutable state is the
 * per-call RNG, which is reconstructed from the key on every call, so a
 * const oracle may be shared between threads.
 */
class NoisyOracle {
 public:
  NoisyOracle(TrueProblem problem, NoiseSpec noise);

  const TrueProblem& problem() const { return problem_; }
  const NoiseSpec& noise() const { return noise_; }
  int n() const { return problem_.n; }
  int q() const { return problem_.q; }

  /// f₀, g₀, c_I and J_I at x, without a Hessian.
  NoisyEvaluation evaluate(const Vector& x, EvalKey key) const;

  /// As above, plus the noisy Lagrangian Hessian at (x, y).
  NoisyEvaluation evaluate(const Vector& x, const Vector& y,
                           EvalKey key) const;

  NoisyValues evaluate_values(const Vector& x, EvalKey key) const;

  /// Noiseless values (harness diagnostics only).
  NoisyEvaluation evaluate_true(const Vector& x, const Vector& y) const;

 private:
  enum class Stream : std::uint64_t { kF = 1, kC, kG, kJ, kH };

  Rng stream_rng(const Vector& x, EvalKey key, Stream stream) const;
  void add_value_noise(const Vector& x, EvalKey key, NoisyValues& v) const;
  void add_derivative_noise(const Vector& x, EvalKey key,
                            NoisyEvaluation& e) const;

  TrueProblem problem_;
  NoiseSpec noise_;
};

/**
 * Rescales the objective and each constraint row whose gradient ∞-norm at
 * x₀ exceeds 10 so that it becomes 10. Factors are recorded in the returned
 * problem's `scaling` (compounded with any existing factors).
 */
TrueProblem scale_problem(const TrueProblem& problem);

}  // namespace noisyip
