// Copyright (c) noisyip contributors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "noisyip/globalization.hpp"

using namespace noisyip;
using Catch::Approx;

TEST_CASE("merit_value examples") {
  Vector c{3};
  c << 3, 0, 0;
  REQUIRE(merit_value(2.0, c, 0.1) == Approx(3.2));
  REQUIRE(merit_value(2.0, Vector::Zero(2), 0.1) == Approx(0.2));
  Vector c2{2};
  c2 << 3, 4;
  REQUIRE(merit_value(0.0, c2, 1.0) == 5.0);
}

TEST_CASE("model_reduction examples") {
  MeritModel mm;
  REQUIRE(model_reduction(mm) == 0.0);
  mm.tau = 1.0;
  mm.gtd = -1.0;
  mm.c_norm = 2.0;
  mm.jv_residual = 1.0;
  REQUIRE(model_reduction(mm) == 2.0);
}

TEST_CASE("update_tau branches") {
  MeritModel mm;
  mm.c_norm = 1.0;
  mm.jv_residual = 0.5;
  SECTION("nonpositive denominator keeps τ") {
    mm.gtd = -1.0;
    mm.uwu = 1.0;
    REQUIRE(std::isinf(trial_merit_parameter(mm, 0.1)));
    REQUIRE(update_tau(0.3, mm, 0.1, 1e-4) == 0.3);
  }
  SECTION("τ already below the trial value") {
    // τ_trial = 0.9·0.5/2.25 = 0.2
    mm.gtd = 2.0;
    mm.uwu = 0.5;
    REQUIRE(trial_merit_parameter(mm, 0.1) == Approx(0.2));
    REQUIRE(update_tau(0.1, mm, 0.1, 1e-4) == 0.1);
  }
  SECTION("τ jumps to the trial value") {
    // τ_trial = 0.9·0.5/9 = 0.05
    mm.gtd = 8.5;
    mm.uwu = 1.0;
    REQUIRE(trial_merit_parameter(mm, 0.1) == Approx(0.05));
    REQUIRE(update_tau(0.1, mm, 0.1, 1e-4) == Approx(0.05));
  }
  SECTION("τ decreases by at least the factor 1 − δ_τ") {
    // τ_trial just below τ_prev
    mm.gtd = 0.9 * 0.5 / 0.0999999 - 0.5;
    mm.uwu = 1.0;
    REQUIRE(update_tau(0.1, mm, 0.1, 1e-4) == Approx(0.1 * (1 - 1e-4)));
  }
  SECTION("worse linearized feasibility is an internal error") {
    mm.jv_residual = 2.0;
    mm.gtd = 1.0;
    REQUIRE_THROWS_AS(update_tau(0.1, mm, 0.1, 1e-4), std::logic_error);
  }
}

TEST_CASE("the updated τ satisfies the sufficient-reduction condition") {
  Rng rng{3};
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    MeritModel mm;
    mm.c_norm = std::abs(unif(rng)) + 1.0;
    mm.jv_residual = mm.c_norm * (0.5 + 0.25 * unif(rng));
    mm.gtd = unif(rng);
    mm.uwu = std::abs(unif(rng));
    mm.tau = update_tau(0.1, mm, 0.1, 1e-4);
    REQUIRE(mm.tau > 0.0);
    REQUIRE(mm.tau <= 0.1);
    REQUIRE(sufficient_reduction_holds(mm, 0.1, 1e-14));
  }
}

TEST_CASE("fraction_to_boundary examples") {
  REQUIRE(fraction_to_boundary(Vector::Ones(2), 0.99) == 1.0);
  Vector ds{2};
  ds << -2, -0.5;
  REQUIRE(fraction_to_boundary(ds, 0.99) == Approx(0.495));
  REQUIRE(fraction_to_boundary(Vector::Constant(1, -0.5), 0.99) == 1.0);
}

TEST_CASE("fraction_to_boundary keeps s + αSdˢ ≥ (1 − η)s") {
  Rng rng{4};
  std::uniform_real_distribution<double> unif(-10.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    Vector s{3};
    Vector ds{3};
    for (int i = 0; i < 3; ++i) {
      s(i) = std::abs(unif(rng)) + 1e-3;
      ds(i) = unif(rng);
    }
    const double alpha = fraction_to_boundary(ds, 0.99);
    REQUIRE(alpha > 0.0);
    REQUIRE(alpha <= 1.0);
    const Vector next = s + alpha * s.cwiseProduct(ds);
    REQUIRE((next.array() >= (0.01 * s.array()) * (1 - 1e-12)).all());
  }
}

TEST_CASE("armijo accepts the full step on a convex quadratic") {
  // φ(α) = ½(1 − α)² with Δm = 1 at α_max = 0.5
  const TrialMerit phi = [](double a, int) { return 0.5 * (1 - a) * (1 - a); };
  const auto out = armijo_backtrack(phi, 0.5, 1.0, 0.5, 1e-8, 0.1, 1e-16);
  REQUIRE(out.j == 0);
  REQUIRE(out.alpha == 0.5);
}

TEST_CASE("armijo accepts an increase below the relaxation") {
  const double eps_k = 1e-3;
  const TrialMerit phi = [&](double, int) { return 1.0 + 2.0 * eps_k; };
  const auto out = armijo_backtrack(phi, 1.0, 0.0, 1.0, 1e-8, 0.1, eps_k);
  REQUIRE(out.j == 0);
}

TEST_CASE("armijo backtracks past a scripted bad trial") {
  const double eps_k = 1e-3;
  std::vector<int> seen;
  const TrialMerit phi = [&](double, int j) {
    seen.push_back(j);
    return j == 0 ? 1.0 + 10.0 * eps_k : 0.5;
  };
  const auto out = armijo_backtrack(phi, 1.0, 1.0, 0.8, 1e-8, 0.1, eps_k);
  REQUIRE(out.j == 1);
  REQUIRE(out.alpha == 0.4);
  REQUIRE(seen == std::vector<int>{0, 1});
  REQUIRE(out.phi_new == 0.5);
}

TEST_CASE("armijo treats a domain error as rejection") {
  const TrialMerit phi = [](double, int j) -> double {
    if (j < 2) {
      throw std::domain_error("slack");
    }
    return 0.0;
  };
  const auto out = armijo_backtrack(phi, 1.0, 1.0, 1.0, 1e-8, 0.1, 1e-16);
  REQUIRE(out.j == 2);
  REQUIRE(out.alpha == 0.25);
}

TEST_CASE("armijo gives up after j_max halvings") {
  const TrialMerit phi = [](double, int) {
    return std::numeric_limits<double>::infinity();
  };
  REQUIRE_THROWS_AS(armijo_backtrack(phi, 1.0, 1.0, 1.0, 1e-8, 0.1, 1e-16, 60),
                    LineSearchFailure);
}
