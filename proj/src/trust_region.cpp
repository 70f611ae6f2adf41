// Copyright (c) noisyip contributors

#include "noisyip/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

namespace noisyip {

namespace {

constexpr int kMaxIterations = 200;

}  // namespace

TrustRegionSolution solve_trust_region(const Matrix& H, const Vector& b,
                                       double delta, double tol) {
  const auto m = b.size();
  if (H.rows() != m || H.cols() != m) {
    throw std::invalid_argument("solve_trust_region: dimension mismatch");
  }
  if (!std::isfinite(delta) || delta < 0.0) {
    throw std::invalid_argument("solve_trust_region: delta must be >= 0");
  }
  if (!H.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("solve_trust_region: nonfinite input");
  }

  TrustRegionSolution sol;
  sol.t = Vector::Zero(m);
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    return sol;
  }
  if (delta == 0.0) {
    sol.lambda = std::numeric_limits<double>::infinity();
    sol.on_boundary = true;
    return sol;
  }

  // Interior candidate: least-norm minimizer −H⁺b, valid when b ∈ range(H).
  {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod{H};
    Vector t0 = cod.solve(-b);
    const double residual = (H * t0 + b).norm();
    const double scale = b_norm + H.norm() * t0.norm();
    if (residual <= 1e-10 * scale && t0.norm() <= delta) {
      sol.t = std::move(t0);
      return sol;
    }
  }

  // Boundary solution: safeguarded Newton on 1/delta − 1/‖t(λ)‖ = 0.
  const double h_norm1 = H.cwiseAbs().colwise().sum().maxCoeff();
  double lo = std::max(0.0, -H.diagonal().minCoeff());
  double hi = b_norm / delta + h_norm1;
  double lambda = lo > 0.0 ? lo : std::min(hi, b_norm / delta) * 1e-3;
  if (!(lambda > lo)) {
    lambda = 0.5 * (lo + hi);
  }

  const Matrix identity = Matrix::Identity(m, m);
  Eigen::LLT<Matrix> llt;
  Vector best_t = Vector::Zero(m);
  double best_lambda = hi;
  double best_gap = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    sol.iterations = iter;
    llt.compute(H + lambda * identity);
    if (llt.info() != Eigen::Success) {
      lo = lambda;
      lambda = lo > 0.0 && hi > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (lambda <= lo) {
        lambda = 0.5 * (lo + hi);
      }
      continue;
    }
    Vector t = llt.solve(-b);
    const double t_norm = t.norm();
    const double gap = std::abs(t_norm - delta);
    if (gap < best_gap) {
      best_gap = gap;
      best_t = t;
      best_lambda = lambda;
    }
    if (gap <= tol * delta) {
      break;
    }
    if (t_norm > delta) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) {
      break;
    }

    const Vector w = llt.matrixL().solve(t);
    const double w_norm_sq = w.squaredNorm();
    double next = lambda;
    if (w_norm_sq > 0.0) {
      next = lambda + (t_norm * t_norm / w_norm_sq) * (t_norm - delta) / delta;
    }
    if (!(next > lo && next < hi)) {
      next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) {
        next = 0.5 * (lo + hi);
      }
    }
    lambda = next;
  }

  sol.t = std::move(best_t);
  sol.lambda = best_lambda;
  sol.on_boundary = true;
  return sol;
}

TrustRegionResult normal_step(const ScaledSystem& sys, double omega,
                              double tol_tr) {
  if (!(omega > 0.0)) {
    throw std::invalid_argument("normal_step: omega must be positive");
  }
  TrustRegionResult result;
  const Vector jtc = sys.J.transpose() * sys.c;
  const double jtc_norm = jtc.norm();
  result.radius = omega * jtc_norm;
  if (jtc_norm == 0.0) {
    result.v = Vector::Zero(sys.J.cols());
    result.predicted_residual = sys.c.norm();
    return result;
  }
  const Matrix jtj = sys.J.transpose() * sys.J;
  TrustRegionSolution tr = solve_trust_region(jtj, jtc, result.radius, tol_tr);
  result.v = std::move(tr.t);
  result.lambda = tr.lambda;
  result.on_boundary = tr.on_boundary;
  result.predicted_residual = (sys.c + sys.J * result.v).norm();
  return result;
}

double cauchy_reduction(const ScaledSystem& sys, double omega) {
  const Vector v_hat = -(sys.J.transpose() * sys.c);
  const Vector jv = sys.J * v_hat;
  const double denom = jv.squaredNorm();
  const double c_norm = sys.c.norm();
  if (denom == 0.0) {
    return 0.0;
  }
  // d/dα ½‖c + αJv̂‖² = cᵀJv̂ + α‖Jv̂‖² with cᵀJv̂ = −‖Jᵀc‖².
  const double alpha = std::clamp(v_hat.squaredNorm() / denom, 0.0, omega);
  return c_norm - (sys.c + alpha * jv).norm();
}

}  // namespace noisyip
