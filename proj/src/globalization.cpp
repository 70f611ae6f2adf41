// Copyright (c) noisyip contributors

#include "noisyip/globalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noisyip {

double merit_value(double f, const Vector& c, double tau) {
  return tau * f + c.norm();
}

double model_reduction(const MeritModel& mm) {
  return -mm.tau * mm.gtd + mm.c_norm - mm.jv_residual;
}

double trial_merit_parameter(const MeritModel& mm, double sigma) {
  const double denom = mm.gtd + 0.5 * mm.uwu;
  const double reduction = mm.c_norm - mm.jv_residual;
  // reduction = 0 only when c = 0, where d minimizes the model on null(J)
  // and the denominator is nonpositive up to rounding.
  if (denom <= 0.0 || reduction <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return (1.0 - sigma) * reduction / denom;
}

double update_tau(double tau_prev, const MeritModel& mm, double sigma,
                  double delta_tau) {
  const double denom = mm.gtd + 0.5 * mm.uwu;
  if (denom > 0.0 && mm.c_norm - mm.jv_residual < -1e-10 * mm.c_norm) {
    throw std::logic_error("update_tau: normal step increased ‖c + Jv‖");
  }
  const double trial = trial_merit_parameter(mm, sigma);
  if (tau_prev <= trial) {
    return tau_prev;
  }
  return std::min((1.0 - delta_tau) * tau_prev, trial);
}

bool sufficient_reduction_holds(const MeritModel& mm, double sigma,
                                double slack) {
  const double lhs = model_reduction(mm);
  const double rhs =
      0.5 * mm.tau * mm.uwu + sigma * (mm.c_norm - mm.jv_residual);
  return lhs >= rhs - slack;
}

double fraction_to_boundary(const Vector& ds, double eta_s) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    if (ds(i) < 0.0) {
      alpha = std::min(alpha, eta_s / -ds(i));
    }
  }
  return alpha;
}

LineSearchOutcome armijo_backtrack(const TrialMerit& trial_merit,
                                   double phi_old, double dm,
                                   double alpha_max, double eta_phi,
                                   double zeta, double eps_k, int j_max) {
  LineSearchOutcome out;
  out.alpha_max = alpha_max;
  out.phi_old = phi_old;
  out.eps_k = eps_k;
  const double relax = (2.0 + zeta) * eps_k;

  double alpha = alpha_max;
  for (int j = 0; j <= j_max; ++j) {
    double phi = std::numeric_limits<double>::infinity();
    try {
      phi = trial_merit(alpha, j);
    } catch (const std::domain_error&) {
      // outside the barrier domain, keep halving
    }
    if (phi <= phi_old - eta_phi * alpha * dm + relax) {
      out.alpha = alpha;
      out.j = j;
      out.phi_new = phi;
      return out;
    }
    alpha *= 0.5;
  }
  throw LineSearchFailure("armijo_backtrack: exceeded j_max backtracks");
}

}  // namespace noisyip
