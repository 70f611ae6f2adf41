// Copyright (c) noisyip contributors

#include "noisyip/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include <lapacke.h>

namespace noisyip {

namespace {

constexpr int kMaxRefinementSteps = 10;

Matrix kkt_matrix(const Matrix& W, const Matrix& J) {
  const auto m = W.rows();
  const auto q = J.rows();
  Matrix K = Matrix::Zero(m + q, m + q);
  K.topLeftCorner(m, m) = W;
  K.topRightCorner(m, q) = J.transpose();
  K.bottomLeftCorner(q, m) = J;
  return K;
}

Vector solve_refined(const SymmetricIndefiniteFactorization& fact,
                     const Matrix& K, const Vector& rhs) {
  Vector sol = fact.solve(rhs);
  Vector r = rhs - K * sol;
  double r_norm = r.norm();
  for (int i = 0; i < kMaxRefinementSteps && r_norm > 0.0; ++i) {
    const Vector candidate = sol + fact.solve(r);
    const Vector r_new = rhs - K * candidate;
    const double r_new_norm = r_new.norm();
    // stop once refinement stalls
    if (!(r_new_norm < 0.5 * r_norm)) {
      if (r_new_norm < r_norm) {
        sol = candidate;
      }
      break;
    }
    sol = candidate;
    r = r_new;
    r_norm = r_new_norm;
  }
  return sol;
}

void fill_result(KktResult& result, const Matrix& W, const Matrix& J,
                 const Vector& g, const Vector& v, const Vector& sol) {
  const auto m = W.rows();
  const auto q = J.rows();
  result.d = sol.head(m);
  result.y_next = sol.tail(q);
  result.u = result.d - v;
  const Vector jv = J * v;
  result.residual_stationarity =
      (W * result.d + J.transpose() * result.y_next + g).norm() /
      (1.0 + g.norm());
  result.residual_feasibility =
      (J * result.d - jv).norm() / (1.0 + jv.norm());
}

}  // namespace

Matrix build_W(const Matrix& H, const Vector& s, const Vector& y, double mu,
               double kappa_sigma) {
  const auto n = H.rows();
  const auto q = s.size();
  Matrix W = Matrix::Zero(n + q, n + q);
  W.topLeftCorner(n, n) = 0.5 * (H + H.transpose());
  for (Eigen::Index i = 0; i < q; ++i) {
    const double lo = mu / (kappa_sigma * s(i));
    const double hi = kappa_sigma * mu / s(i);
    W(n + i, n + i) = s(i) * std::clamp(y(i), lo, hi);
  }
  return W;
}

SymmetricIndefiniteFactorization::SymmetricIndefiniteFactorization(
    const Matrix& A)
    : factor_{A}, pivots_{A.rows()} {
  const auto dim = static_cast<lapack_int>(A.rows());
  if (dim == 0) {
    return;
  }
  // Eigen's default storage is column-major, matching LAPACK.
  const lapack_int info =
      LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', dim, factor_.data(), dim,
                     pivots_.data());
  if (info < 0) {
    throw std::invalid_argument("dsytrf: illegal argument");
  }
  singular_ = info > 0;
}

Inertia SymmetricIndefiniteFactorization::inertia(double pd_tol) const {
  Inertia in;
  const auto dim = factor_.rows();
  auto count = [&](double eig) {
    if (eig >= pd_tol) {
      ++in.positive;
    } else if (eig < 0.0) {
      ++in.negative;
    } else {
      ++in.zero;
    }
  };
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (pivots_(k) > 0) {
      count(factor_(k, k));
      continue;
    }
    // 2×2 block occupying rows k, k+1.
    const double a = factor_(k, k);
    const double b = factor_(k + 1, k);
    const double c = factor_(k + 1, k + 1);
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    count(mean + radius);
    count(mean - radius);
    ++k;
  }
  return in;
}

Vector SymmetricIndefiniteFactorization::solve(const Vector& rhs) const {
  Vector x = rhs;
  const auto dim = static_cast<lapack_int>(factor_.rows());
  if (dim == 0) {
    return x;
  }
  const lapack_int info =
      LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', dim, 1, factor_.data(), dim,
                     pivots_.data(), x.data(), dim);
  if (info != 0) {
    throw std::runtime_error("dsytrs failed");
  }
  return x;
}

bool tangential_curvature_ok(const Matrix& W, const Matrix& J, const Vector& u,
                             double pd_tol) {
  Vector u_null = u;
  if (J.rows() > 0) {
    u_null -= J.transpose() * (J * J.transpose()).ldlt().solve(J * u);
  }
  const double curvature = u_null.dot(W * u_null);
  const double w_norm =
      W.size() == 0 ? 0.0 : W.cwiseAbs().colwise().sum().maxCoeff();
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  return curvature >= pd_tol * u_null.squaredNorm() -
                          64.0 * kEps * w_norm * u.squaredNorm();
}

KktResult solve_kkt(const Matrix& W, const Matrix& J, const Vector& g,
                    const Vector& v) {
  const auto m = W.rows();
  const auto q = J.rows();
  const Matrix K = kkt_matrix(W, J);
  Vector rhs{m + q};
  rhs.head(m) = -g;
  rhs.tail(q) = J * v;
  SymmetricIndefiniteFactorization fact{K};
  KktResult result;
  result.W_used = W;
  result.factorizations = 1;
  fill_result(result, W, J, g, v, solve_refined(fact, K, rhs));
  return result;
}

KktResult inertia_correct_and_solve(const Matrix& W, const ScaledSystem& sys,
                                    const Vector& v, double pd_tol,
                                    const ShiftSchedule& schedule) {
  const auto m = W.rows();
  const auto q = sys.J.rows();
  const int want_positive = static_cast<int>(m);
  const int want_negative = static_cast<int>(q);

  const Matrix identity = Matrix::Identity(m, m);
  Matrix K = kkt_matrix(W, sys.J);

  KktResult result;
  double delta = 0.0;
  for (;;) {
    if (delta > 0.0) {
      K.topLeftCorner(m, m) = W + delta * identity;
    }
    SymmetricIndefiniteFactorization fact{K};
    ++result.factorizations;
    const Inertia in = fact.inertia(pd_tol);
    if (!fact.singular() && in.positive == want_positive &&
        in.negative == want_negative) {
      Vector rhs{m + q};
      rhs.head(m) = -sys.g;
      rhs.tail(q) = sys.J * v;
      result.W_used = K.topLeftCorner(m, m);
      result.shift = delta;
      result.inertia = in;
      fill_result(result, result.W_used, sys.J, sys.g, v,
                  solve_refined(fact, K, rhs));
      // Correct inertia alone allows null-space curvature far below pd_tol
      // (Σ can be as small as μ/κ_σ); shift further in that case.
      if (tangential_curvature_ok(result.W_used, sys.J, result.u, pd_tol)) {
        return result;
      }
    }
    if (delta == 0.0) {
      delta = schedule.warm_delta > 0.0
                  ? std::max(schedule.delta_min,
                             schedule.warm_decrease * schedule.warm_delta)
                  : schedule.delta_min;
    } else {
      delta = std::max(schedule.delta_min, schedule.growth * delta);
    }
    if (delta > schedule.delta_max) {
      throw KktFailure("inertia correction: shift exceeded delta_max");
    }
  }
}

}  // namespace noisyip
