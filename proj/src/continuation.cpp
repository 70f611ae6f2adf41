// Copyright (c) noisyip contributors

#include <algorithm>
#include <cmath>

#include "noisyip/solver.hpp"

namespace noisyip {

// Threshold recipe. With the last record k and running maxima g_sup ≥ ‖g_i‖,
// J_sup ≥ ‖J_i‖ over the subproblem so far:
//
//   ω_k  = ‖Jᵀc‖/‖v‖ (ω when v = 0)
//   ε_v  = ω_k (J_sup ε_c + (‖c‖ + ε_c) ε_J)
//   ε_u  = ε_g + ε_J ‖y₊‖
//   ε_d  = ε_v + ε_u
//   e₁   = (τ₀ ε_g + ε_J) ε_d + 2 ε_c,   e₂ = τ₀ ε_g + ε_J
//   c₁   = (τ₀ g_sup + J_sup) ε_d,       c₂ = ε_τ g_sup
//   ε_τ  = τ_k min{1, ε_d/‖d‖}
//
// and with ξ_d = Δm/‖d‖² (so ξ_d^(−1/2) Δm^(1/2) = ‖d‖)
//
//   ρ₁ = 2 (η/(1−η) e₁ + c₁ + (η/(1−η) e₂ + c₂) ‖d‖)
//   ρ₂ = 2 (e₁ + c₁ + (e₂ + c₂) ‖d‖)
//
// threshold = max{ρ₁, ρ₂, (κ_ε μ)²}. Every noise term vanishes when all
// ε = 0, leaving the μ² floor.
double reduction_threshold(const std::vector<IterationRecord>& trace,
                           const SolverConfig& config) {
  if (trace.empty()) {
    return 0.0;
  }
  double g_sup = 0.0;
  double j_sup = 0.0;
  for (const auto& rec : trace) {
    g_sup = std::max(g_sup, rec.norm_g);
    j_sup = std::max(j_sup, rec.norm_J);
  }
  const IterationRecord& last = trace.back();
  const double tau0 = trace.front().tau;

  const double omega_k = last.norm_v > 0.0
                             ? last.stat_infeas_noisy / last.norm_v
                             : config.omega;
  const double eps_v =
      omega_k * (j_sup * config.eps_c + (last.norm_c + config.eps_c) *
                                            config.eps_J);
  const double eps_u = config.eps_g + config.eps_J * last.norm_y_next;
  const double eps_d = eps_v + eps_u;

  const double e1 = (tau0 * config.eps_g + config.eps_J) * eps_d +
                    2.0 * config.eps_c;
  const double e2 = tau0 * config.eps_g + config.eps_J;
  const double c1 = (tau0 * g_sup + j_sup) * eps_d;
  const double eps_tau =
      last.norm_d > 0.0 ? last.tau * std::min(1.0, eps_d / last.norm_d) : 0.0;
  const double c2 = eps_tau * g_sup;

  const double eta = config.eta_phi;
  const double r = eta / (1.0 - eta);
  const double rho1 = 2.0 * (r * e1 + c1 + (r * e2 + c2) * last.norm_d);
  const double rho2 = 2.0 * (e1 + c1 + (e2 + c2) * last.norm_d);
  const double floor = std::pow(config.continuation.kappa_eps * config.mu, 2);
  return std::max({rho1, rho2, floor});
}

bool should_reduce_mu(const std::vector<IterationRecord>& trace,
                      const SolverConfig& config) {
  if (trace.empty()) {
    return false;
  }
  return trace.back().dm <= reduction_threshold(trace, config);
}

double next_mu(double mu, const ContinuationConfig& config) {
  return std::max(config.mu_min,
                  std::min(config.kappa_mu * mu, std::pow(mu, config.theta_mu)));
}

std::vector<SolveResult> continuation_loop(const NoisyOracle& oracle,
                                           const SolverConfig& config,
                                           const DiagnosticsHook& hook) {
  SolverConfig sub = config;
  sub.continuation.enabled = true;
  sub.validate();

  std::vector<SolveResult> results;
  BarrierState state = initial_state(oracle, sub);
  int budget = config.max_iter;
  for (;;) {
    sub.max_iter = budget;
    // η_s follows μ unless fixed by the caller.
    sub.eta_s = config.eta_s;
    SolveResult res = solve_barrier_subproblem(oracle, sub, state, hook);
    budget -= res.iterations();
    const bool reduce = res.status == SolveStatus::kBarrierThreshold;
    const bool at_min = sub.mu <= sub.continuation.mu_min;
    state = res.final_state;
    results.push_back(std::move(res));
    if (!reduce || at_min || budget <= 0) {
      break;
    }
    sub.mu = next_mu(sub.mu, sub.continuation);
    state.mu = sub.mu;
    state.y = sub.mu * state.s.cwiseInverse();
  }
  return results;
}

}  // namespace noisyip
