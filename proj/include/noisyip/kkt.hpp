// Copyright (c) noisyip contributors

#pragma once

#include <stdexcept>
#include <string>

#include "noisyip/barrier.hpp"
#include "noisyip/problem.hpp"

namespace noisyip {

/**
 * W = blkdiag(H, Σ) with Σᵢᵢ = sᵢ·clamp(yᵢ, μ/(κ_σ sᵢ), κ_σ μ/sᵢ), so every
 * Σᵢᵢ lies in [μ/κ_σ, κ_σ μ].
 */
Matrix build_W(const Matrix& H, const Vector& s, const Vector& y, double mu,
               double kappa_sigma = 1e10);

struct Inertia {
  /// Eigenvalues of D at least pd_tol.
  int positive = 0;
  int negative = 0;
  /// Everything else: exact zeros and positives below pd_tol.
  int zero = 0;
};

/// Parameters of the diagonal shift W ← W + δI.
struct ShiftSchedule {
  double delta_min = 1e-8;
  double delta_max = 1e8;
  double growth = 10.0;
  /// Shift used on the previous iteration, 0 if none.
  double warm_delta = 0.0;
  /// Factor applied to warm_delta on the first retry.
  double warm_decrease = 1.0 / 3.0;
};

struct KktResult {
  Vector d;
  Vector u;
  Vector y_next;
  Matrix W_used;
  double shift = 0.0;
  Inertia inertia;
  int factorizations = 0;
  /// ‖W d + Jᵀy₊ + g‖ / (1 + ‖g‖)
  double residual_stationarity = 0.0;
  /// ‖J d − J v‖ / (1 + ‖J v‖)
  double residual_feasibility = 0.0;
};

/// Thrown when the shift exceeds ShiftSchedule::delta_max.
class KktFailure : public std::runtime_error {
 public:
  explicit KktFailure(const std::string& what) : std::runtime_error{what} {}
};

/**
 * Bunch–Kaufman LDLᵀ of a symmetric matrix (LAPACK dsytrf). inertia() counts
 * the eigenvalues of the block diagonal D.
 */
class SymmetricIndefiniteFactorization {
 public:
  explicit SymmetricIndefiniteFactorization(const Matrix& A);

  bool singular() const { return singular_; }
  Inertia inertia(double pd_tol) const;
  Vector solve(const Vector& rhs) const;

 private:
  Matrix factor_;
  Eigen::VectorXi pivots_;
  bool singular_ = false;
};

/**
 * uᵀWu ≥ pd_tol‖u‖² for the component of u in null(J), up to rounding of
 * order eps‖W‖‖u‖² (the part of u outside null(J) is rounding error).
 */
bool tangential_curvature_ok(const Matrix& W, const Matrix& J, const Vector& u,
                             double pd_tol);

/**
 * Factors K = [[W + δI, Jᵀ], [J, 0]] and raises δ along `schedule` until the
 * inertia is (n+q, q, 0) with every positive pivot eigenvalue at least
 * pd_tol, then solves
 *
 *   [[W, Jᵀ], [J, 0]] [d; y₊] = [−g; Jv].
 *
 * With W of order n+q the correct count of positive eigenvalues is n+q (one
 * per primal-slack variable); that certifies W positive definite on null(J).
 * A factorization with correct inertia is still rejected when the computed
 * tangential step fails tangential_curvature_ok().
 *
 * Throws KktFailure when δ would exceed schedule.delta_max.
 */
KktResult inertia_correct_and_solve(const Matrix& W, const ScaledSystem& sys,
                                    const Vector& v, double pd_tol = 1e-10,
                                    const ShiftSchedule& schedule = {});

/// Solves the KKT system once with the given W (no inertia control).
KktResult solve_kkt(const Matrix& W, const Matrix& J, const Vector& g,
                    const Vector& v);

}  // namespace noisyip
