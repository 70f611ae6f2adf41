// Copyright (c) noisyip contributors

#include "noisyip/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "noisyip/globalization.hpp"
#include "noisyip/kkt.hpp"
#include "noisyip/trust_region.hpp"

namespace noisyip {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kKktTol = 1e-8;
constexpr double kCauchyFactor = 1.0 - 1e-8;

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd{A};
  return svd.singularValues()(0);
}

void fill_true_placeholders(IterationRecord& rec) {
  rec.stat_kkt_true = std::numeric_limits<double>::quiet_NaN();
  rec.stat_infeas_true = std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double SolverConfig::eta_s_value() const {
  return eta_s ? *eta_s : std::max(0.99, 1.0 - mu);
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument(std::string{"SolverConfig: "} + what);
    }
  };
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
  require(std::isfinite(tau_init) && tau_init > 0.0,
          "tau_init must be positive");
  require(std::isfinite(omega) && omega > 0.0, "omega must be positive");
  require(in_open_unit(sigma), "sigma must lie in (0, 1)");
  require(in_open_unit(delta_tau), "delta_tau must lie in (0, 1)");
  require(in_open_unit(eta_s_value()), "eta_s must lie in (0, 1)");
  require(in_open_unit(eta_phi), "eta_phi must lie in (0, 1)");
  require(std::isfinite(zeta) && zeta > 0.0, "zeta must be positive");
  for (double e : {eps_f, eps_c, eps_g, eps_J}) {
    require(std::isfinite(e) && e >= 0.0, "noise bounds must be >= 0");
  }
  require(eps_k_floor > 0.0, "eps_k_floor must be positive");
  require(max_iter >= 0, "max_iter must be >= 0");
  require(time_limit > 0.0, "time_limit must be positive");
  require(std::isfinite(tol_term) && tol_term >= 0.0, "tol_term must be >= 0");
  require(kappa_sigma >= 1.0, "kappa_sigma must be >= 1");
  require(pd_tol > 0.0, "pd_tol must be positive");
  require(hessian_multiplier_cap > 0.0,
          "hessian_multiplier_cap must be positive");
  require(j_max >= 0, "j_max must be >= 0");
  if (continuation.enabled) {
    require(in_open_unit(continuation.kappa_mu), "kappa_mu must lie in (0, 1)");
    require(continuation.theta_mu > 1.0 && continuation.theta_mu < 2.0,
            "theta_mu must lie in (1, 2)");
    require(continuation.mu_min > 0.0 && continuation.mu_min <= mu,
            "mu_min must lie in (0, mu]");
    require(continuation.kappa_eps >= 0.0, "kappa_eps must be >= 0");
  }
}

SolverConfig SolverConfig::with_noise(const NoiseSpec& noise, double mu) {
  SolverConfig config;
  config.mu = mu;
  config.eps_f = noise.eps_f;
  config.eps_c = noise.eps_c;
  config.eps_g = noise.eps_g;
  config.eps_J = noise.eps_J;
  return config;
}

std::string status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kInfeasibleStationary:
      return "InfeasibleStationary";
    case SolveStatus::kStationary:
      return "Stationary";
    case SolveStatus::kMaxIter:
      return "MaxIter";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kFailure:
      return "Failure";
    case SolveStatus::kBarrierThreshold:
      return "BarrierThreshold";
  }
  return "Unknown";
}

std::string describe_violations(std::uint32_t mask) {
  static const std::pair<std::uint32_t, const char*> kNames[] = {
      {kSlackPositive, "slack_positive"},
      {kResetFeasible, "reset_feasible"},
      {kSufficientReduction, "sufficient_reduction"},
      {kFractionToBoundary, "fraction_to_boundary"},
      {kArmijo, "armijo"},
      {kTauMonotone, "tau_monotone"},
      {kCauchyDecrease, "cauchy_decrease"},
      {kKktResidual, "kkt_residual"},
      {kLinearizedFeasibility, "linearized_feasibility"},
      {kTangentialCurvature, "tangential_curvature"},
      {kNormalStepRadius, "normal_step_radius"},
      {kResetMerit, "reset_merit"},
  };
  std::string out;
  for (const auto& [bit, name] : kNames) {
    if (mask & bit) {
      if (!out.empty()) {
        out += ",";
      }
      out += name;
    }
  }
  return out;
}

int SolveResult::iterations() const {
  int count = 0;
  for (const auto& rec : trace) {
    if (!rec.terminal) {
      ++count;
    }
  }
  return count;
}

int SolveResult::violation_count() const {
  int count = 0;
  for (const auto& rec : trace) {
    if (rec.violations != 0) {
      ++count;
    }
  }
  return count;
}

BarrierState initial_state(const NoisyOracle& oracle,
                           const SolverConfig& config) {
  BarrierState state;
  state.x = oracle.problem().x0;
  state.s = init_slacks(oracle, state.x);
  state.y = config.mu * state.s.cwiseInverse();
  state.tau = config.tau_init;
  state.mu = config.mu;
  state.k = 0;
  return state;
}

SolveResult solve_barrier_subproblem(const NoisyOracle& oracle,
                                     const SolverConfig& config,
                                     const BarrierState& start,
                                     const DiagnosticsHook& hook) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t_start).count();
  };

  const int n = oracle.n();
  const int q = oracle.q();
  if (start.x.size() != n || start.s.size() != q || start.y.size() != q) {
    throw std::invalid_argument("solve_barrier_subproblem: bad start sizes");
  }
  if (!(start.tau > 0.0)) {
    throw std::invalid_argument("solve_barrier_subproblem: tau must be > 0");
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    if (!(start.s(i) > 0.0)) {
      throw std::invalid_argument("solve_barrier_subproblem: s must be > 0");
    }
  }

  const double mu = config.mu;
  const double eta_s = config.eta_s_value();

  SolveResult result;
  BarrierState state = start;
  state.mu = mu;

  // f₀ and c_I at the iterate come from the accepted line-search trial; the
  // first iterate takes them from its own evaluation.
  std::optional<NoisyValues> carried;
  double warm_delta = 0.0;

  auto finish = [&](SolveStatus status, std::string message = {}) {
    result.status = status;
    result.message = std::move(message);
    result.final_state = state;
    result.wall_time = elapsed();
    return result;
  };

  for (int local = 0;; ++local) {
    if (local >= config.max_iter) {
      return finish(SolveStatus::kMaxIter);
    }
    if (elapsed() > config.time_limit) {
      return finish(SolveStatus::kTimeLimit);
    }

    const EvalKey key{state.k, 0};
    // Multipliers fed to the Hessian are kept in [0, cap] so W stays bounded
    // when y grows (e.g. on infeasible problems).
    const Vector y_hessian =
        state.y.cwiseMax(0.0).cwiseMin(config.hessian_multiplier_cap);
    NoisyEvaluation eval = oracle.evaluate(state.x, y_hessian, key);
    if (carried) {
      eval.f0 = carried->f0;
      eval.c_i = carried->c_i;
    } else {
      // Keep c(z) ≥ 0 under this iteration's draw of c_I.
      state.s = slack_reset(state.s, eval.c_i);
    }
    result.final_values = NoisyValues{eval.f0, eval.c_i};

    ScaledSystem sys;
    try {
      sys = assemble(eval, state.s, mu);
    } catch (const std::exception& e) {
      return finish(SolveStatus::kFailure, e.what());
    }
    if (!std::isfinite(sys.f) || !sys.c.allFinite() || !sys.g.allFinite() ||
        !sys.J.allFinite()) {
      return finish(SolveStatus::kFailure, "nonfinite evaluation");
    }

    IterationRecord rec;
    rec.k = static_cast<int>(state.k);
    rec.mu = mu;
    rec.tau = state.tau;
    rec.merit_noisy = merit_value(sys.f, sys.c, state.tau);
    fill_true_placeholders(rec);
    const Vector jtc = sys.J.transpose() * sys.c;
    rec.stat_infeas_noisy = jtc.norm();
    rec.norm_c = sys.c.norm();
    rec.norm_g = sys.g.norm();
    rec.norm_J = spectral_norm(sys.J);
    rec.stat_kkt_noisy = rec.norm_c;

    const Matrix W = build_W(eval.hessian, state.s, state.y, mu,
                             config.kappa_sigma);

    // Termination test 1: infeasible stationary point.
    if (config.tol_term > 0.0 && rec.stat_infeas_noisy <= config.tol_term &&
        eval.c_i.maxCoeff() > 0.0) {
      rec.terminal = true;
      rec.norm_jv_residual = rec.norm_c;
      if (hook) {
        hook(DiagnosticsInput{oracle, config, state.x, state.s, mu, eval, W},
             rec);
      }
      result.trace.push_back(rec);
      return finish(SolveStatus::kInfeasibleStationary);
    }

    // Normal step.
    const TrustRegionResult normal = normal_step(sys, config.omega,
                                                 config.tol_tr);
    const Vector& v = normal.v;
    rec.norm_v = v.norm();
    rec.norm_jv_residual = normal.predicted_residual;

    // Full step and multipliers.
    KktResult kkt;
    try {
      ShiftSchedule schedule;
      schedule.warm_delta = warm_delta;
      kkt = inertia_correct_and_solve(W, sys, v, config.pd_tol, schedule);
    } catch (const KktFailure& e) {
      return finish(SolveStatus::kFailure, e.what());
    }
    warm_delta = kkt.shift;
    result.last_shift = kkt.shift;
    rec.shift = kkt.shift;
    rec.norm_d = kkt.d.norm();
    rec.norm_u = kkt.u.norm();
    rec.norm_y_next = kkt.y_next.norm();
    rec.kkt_residual_stationarity = kkt.residual_stationarity;
    rec.kkt_residual_feasibility = kkt.residual_feasibility;
    const double grad_lag = (sys.g + sys.J.transpose() * kkt.y_next).norm();
    rec.stat_kkt_noisy = std::max(grad_lag, rec.norm_c);
    rec.gtd = sys.g.dot(kkt.d);
    rec.uwu = kkt.u.dot(kkt.W_used * kkt.u);
    const double jd_residual = (sys.c + sys.J * kkt.d).norm();
    rec.linearized_gap = std::abs(jd_residual - rec.norm_jv_residual);

    // Termination test 2: stationary for the barrier subproblem.
    if (config.tol_term > 0.0 && rec.stat_infeas_noisy <= config.tol_term &&
        grad_lag <= config.tol_term) {
      rec.terminal = true;
      if (hook) {
        hook(DiagnosticsInput{oracle, config, state.x, state.s, mu, eval,
                              kkt.W_used},
             rec);
      }
      state.y = kkt.y_next;
      result.trace.push_back(rec);
      return finish(SolveStatus::kStationary);
    }

    // Merit parameter.
    MeritModel mm;
    mm.tau = state.tau;
    mm.f = sys.f;
    mm.c_norm = rec.norm_c;
    mm.jv_residual = rec.norm_jv_residual;
    mm.gtd = rec.gtd;
    mm.uwu = rec.uwu;
    const double tau_prev = state.tau;
    double tau = tau_prev;
    try {
      tau = update_tau(tau_prev, mm, config.sigma, config.delta_tau);
    } catch (const std::logic_error& e) {
      return finish(SolveStatus::kFailure, e.what());
    }
    rec.tau_trial = trial_merit_parameter(mm, config.sigma);
    mm.tau = tau;
    rec.tau = tau;
    rec.dm = model_reduction(mm);
    rec.merit_noisy = merit_value(sys.f, sys.c, tau);

    // Step size.
    const Vector dx = kkt.d.head(n);
    const Vector ds = kkt.d.tail(q);
    rec.alpha_max = fraction_to_boundary(ds, eta_s);
    rec.eps_k = std::max(tau * config.eps_f + config.eps_c,
                         config.eps_k_floor);

    std::vector<NoisyValues> trial_values;
    const TrialMerit trial_merit = [&](double alpha, int j) {
      const Vector x_t = state.x + alpha * dx;
      const Vector s_t =
          state.s + alpha * state.s.cwiseProduct(ds);
      NoisyValues vals = oracle.evaluate_values(x_t, EvalKey{state.k, j + 1});
      trial_values.resize(static_cast<std::size_t>(j) + 1);
      trial_values[static_cast<std::size_t>(j)] = vals;
      const double f_t = barrier_objective(vals.f0, s_t, mu);
      return merit_value(f_t, vals.c_i + s_t, tau);
    };
    LineSearchOutcome ls;
    try {
      ls = armijo_backtrack(trial_merit, rec.merit_noisy, rec.dm,
                            rec.alpha_max, config.eta_phi, config.zeta,
                            rec.eps_k, config.j_max);
    } catch (const LineSearchFailure& e) {
      return finish(SolveStatus::kFailure, e.what());
    }
    rec.alpha = ls.alpha;
    rec.j = ls.j;
    rec.phi_trial = ls.phi_new;

    const NoisyValues& accepted = trial_values[static_cast<std::size_t>(ls.j)];
    const Vector x_next = state.x + ls.alpha * dx;
    const Vector s_cand = state.s + ls.alpha * state.s.cwiseProduct(ds);
    const Vector s_next = slack_reset(s_cand, accepted.c_i);

    if (hook) {
      hook(DiagnosticsInput{oracle, config, state.x, state.s, mu, eval,
                            kkt.W_used},
           rec);
    }

    if (config.check_invariants) {
      std::uint32_t bad = 0;
      if ((s_next.array() <= 0.0).any()) {
        bad |= kSlackPositive;
      }
      if (((accepted.c_i + s_next).array() < 0.0).any()) {
        bad |= kResetFeasible;
      }
      // Sufficient reduction holds exactly for the exact step; the computed
      // step carries the KKT residuals r₁, r₂ into gᵀd + uᵀWu.
      const double r1 = kkt.residual_stationarity * (1.0 + rec.norm_g);
      const double r2 =
          kkt.residual_feasibility * (1.0 + (sys.J * v).norm());
      const double reduction_slack =
          tau * (r1 * rec.norm_d + rec.norm_y_next * r2) +
          64.0 * kEps *
              (rec.norm_c + tau * (std::abs(rec.gtd) + std::abs(rec.uwu)));
      if (!sufficient_reduction_holds(mm, config.sigma, reduction_slack)) {
        bad |= kSufficientReduction;
      }
      for (Eigen::Index i = 0; i < q; ++i) {
        if (s_cand(i) < (1.0 - eta_s) * state.s(i) - 4.0 * kEps * state.s(i)) {
          bad |= kFractionToBoundary;
        }
      }
      const double armijo_rhs = rec.merit_noisy -
                                config.eta_phi * ls.alpha * rec.dm +
                                (2.0 + config.zeta) * rec.eps_k;
      if (!(ls.phi_new <= armijo_rhs)) {
        bad |= kArmijo;
      }
      if (!(tau > 0.0 && tau <= tau_prev)) {
        bad |= kTauMonotone;
      }
      const double cauchy = cauchy_reduction(sys, config.omega);
      if (rec.norm_c - rec.norm_jv_residual <
          kCauchyFactor * cauchy - 64.0 * kEps * rec.norm_c) {
        bad |= kCauchyDecrease;
      }
      if (kkt.residual_stationarity > kKktTol ||
          kkt.residual_feasibility > kKktTol) {
        bad |= kKktResidual;
      }
      if (rec.linearized_gap > kKktTol * (1.0 + rec.norm_c)) {
        bad |= kLinearizedFeasibility;
      }
      if (!tangential_curvature_ok(kkt.W_used, sys.J, kkt.u, config.pd_tol)) {
        bad |= kTangentialCurvature;
      }
      if (rec.norm_v > normal.radius * (1.0 + 1e-10)) {
        bad |= kNormalStepRadius;
      }
      try {
        const double phi_reset =
            merit_value(barrier_objective(accepted.f0, s_next, mu),
                        accepted.c_i + s_next, tau);
        if (phi_reset > ls.phi_new + 1e-12 * (1.0 + std::abs(ls.phi_new))) {
          bad |= kResetMerit;
        }
      } catch (const std::domain_error&) {
        bad |= kSlackPositive;
      }
      rec.violations = bad;
    }

    result.trace.push_back(rec);

    state.x = x_next;
    state.s = s_next;
    state.y = kkt.y_next;
    state.tau = tau;
    ++state.k;
    carried = accepted;
    result.final_values = accepted;

    if (config.continuation.enabled &&
        should_reduce_mu(result.trace, config)) {
      return finish(SolveStatus::kBarrierThreshold);
    }
  }
}

}  // namespace noisyip
