// Copyright (c) noisyip contributors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Cholesky>

#include "noisyip/barrier.hpp"
#include "noisyip/kkt.hpp"
#include "noisyip/trust_region.hpp"
#include "support/oracles.hpp"

using namespace noisyip;
using Catch::Approx;

namespace {

Vector vec2(double a, double b) {
  Vector v{2};
  v << a, b;
  return v;
}

ScaledSystem system_from(const Matrix& J, const Vector& c, const Vector& g) {
  ScaledSystem sys;
  sys.J = J;
  sys.c = c;
  sys.g = g;
  return sys;
}

Matrix random_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Matrix A{rows, cols};
  for (Eigen::Index i = 0; i < A.size(); ++i) {
    A.data()[i] = normal(rng);
  }
  return A;
}

}  // namespace

TEST_CASE("trust region: interior Newton point") {
  const auto sol =
      solve_trust_region(Matrix::Identity(2, 2), vec2(3, 4), 10.0);
  REQUIRE(sol.t.isApprox(vec2(-3, -4), 1e-12));
  REQUIRE(sol.lambda == 0.0);
  REQUIRE_FALSE(sol.on_boundary);
}

TEST_CASE("trust region: boundary solution") {
  const auto sol = solve_trust_region(Matrix::Identity(2, 2), vec2(3, 4), 1.0);
  REQUIRE(sol.t.isApprox(vec2(-0.6, -0.8), 1e-10));
  REQUIRE(sol.lambda == Approx(4.0).epsilon(1e-10));
  REQUIRE(sol.on_boundary);
}

TEST_CASE("trust region: least-norm minimizer of a singular system") {
  Matrix H = Matrix::Zero(2, 2);
  H(1, 1) = 1.0;
  const auto sol = solve_trust_region(H, vec2(0, 1), 2.0);
  REQUIRE(sol.t.isApprox(vec2(0, -1), 1e-12));
  REQUIRE(sol.lambda == 0.0);
}

TEST_CASE("trust region: argument errors") {
  const Matrix H = Matrix::Identity(2, 2);
  REQUIRE_THROWS_AS(solve_trust_region(H, vec2(1, 1), -1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(solve_trust_region(H, vec2(std::nan(""), 1), 1.0),
                    std::invalid_argument);
}

TEST_CASE("trust region: zero radius") {
  const auto sol =
      solve_trust_region(Matrix::Identity(2, 2), vec2(1, 0), 0.0);
  REQUIRE(sol.t.isZero(0.0));
}

TEST_CASE("trust region agrees with the eigendecomposition oracle") {
  Rng rng{99};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 8;
    const int rank = trial % (m + 1);
    const Matrix A = random_matrix(rng, rank, m);
    const Matrix H = A.transpose() * A;
    const Vector b = random_matrix(rng, m, 1);
    const double delta = 3.0 * unif(rng);
    const auto sol = solve_trust_region(H, b, delta);
    const double oracle = testing::trs_optimal_value(H, b, delta);
    REQUIRE(testing::trs_objective(H, b, sol.t) ==
            Approx(oracle).margin(1e-8));
    REQUIRE(sol.t.norm() <= delta * (1 + 1e-10) + 1e-14);
  }
}

TEST_CASE("normal step examples") {
  Matrix J{1, 3};
  J << 1, 0, 2;
  const Vector c = Vector::Constant(1, 3.0);
  const auto sys = system_from(J, c, Vector::Zero(3));

  SECTION("interior least-squares step") {
    const auto r = normal_step(sys, 1e3);
    Vector expected{3};
    expected << -0.6, 0, -1.2;
    REQUIRE(r.v.isApprox(expected, 1e-10));
    REQUIRE_FALSE(r.on_boundary);
    REQUIRE(r.predicted_residual == Approx(0.0).margin(1e-12));
  }
  SECTION("boundary step along −Jᵀc") {
    const auto r = normal_step(sys, 0.1);
    Vector expected{3};
    expected << -0.3, 0, -0.6;
    REQUIRE(r.v.isApprox(expected, 1e-10));
    REQUIRE(r.on_boundary);
    REQUIRE(r.radius == Approx(0.1 * 3 * std::sqrt(5.0)));
  }
  SECTION("zero Jᵀc gives v = 0") {
    const auto r = normal_step(system_from(J, Vector::Zero(1), Vector::Zero(3)),
                               1e3);
    REQUIRE(r.v.isZero(0.0));
  }
}

TEST_CASE("normal step invariants on random systems") {
  Rng rng{17};
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const int q = 1 + trial % 3;
    Matrix JI = random_matrix(rng, q, n);
    Vector s{q};
    for (int i = 0; i < q; ++i) {
      s(i) = unif(rng);
    }
    const Vector c = random_matrix(rng, q, 1);
    const auto sys = assemble(0.0, Vector::Zero(n), c - s, JI, s, 0.1);
    const double omega = trial % 2 == 0 ? 1e3 : 0.05;
    const auto r = normal_step(sys, omega);
    const Vector jtc = sys.J.transpose() * sys.c;
    REQUIRE(r.v.norm() <= omega * jtc.norm() * (1 + 1e-12));
    // v ∈ range(Jᵀ)
    const Matrix& J = sys.J;
    const Vector proj =
        r.v - J.transpose() * (J * J.transpose()).ldlt().solve(J * r.v);
    REQUIRE(proj.norm() <= 1e-10 * std::max(1.0, r.v.norm()));
    REQUIRE((sys.c + J * r.v).norm() <= sys.c.norm());
    // Cauchy decrease
    const double red = sys.c.norm() - (sys.c + J * r.v).norm();
    REQUIRE(red >= (1 - 1e-8) * cauchy_reduction(sys, omega) - 1e-14);
  }
}

TEST_CASE("build_W examples") {
  SECTION("initial duals give Σ = μI") {
    const Vector s = vec2(0.5, 4.0);
    const Vector y = 0.1 * s.cwiseInverse();
    const Matrix W = build_W(Matrix::Zero(1, 1), s, y, 0.1);
    REQUIRE(W.rows() == 3);
    REQUIRE(W(1, 1) == Approx(0.1));
    REQUIRE(W(2, 2) == Approx(0.1));
  }
  SECTION("negative multiplier is clamped") {
    const Matrix W = build_W(Matrix::Zero(1, 1), Vector::Ones(1),
                             Vector::Constant(1, -1.0), 0.1, 1e10);
    REQUIRE(W(1, 1) == Approx(1e-11));
  }
  SECTION("symmetric block structure") {
    Matrix H{1, 1};
    H << 0.0;
    const Matrix W = build_W(H, Vector::Ones(1), Vector::Ones(1), 0.1);
    REQUIRE(W.isApprox(W.transpose()));
    REQUIRE(W(0, 1) == 0.0);
  }
  SECTION("huge multiplier is clamped from above") {
    const Matrix W = build_W(Matrix::Zero(1, 1), Vector::Ones(1),
                             Vector::Constant(1, 1e20), 0.1, 1e10);
    REQUIRE(W(1, 1) == Approx(1e9));
  }
}

TEST_CASE("KKT: positive definite W needs no shift") {
  Matrix J{1, 2};
  J << 1, 0;
  const auto sys = system_from(J, Vector::Zero(1), vec2(1, 1));
  const auto r =
      inertia_correct_and_solve(Matrix::Identity(2, 2), sys, Vector::Zero(2));
  REQUIRE(r.shift == 0.0);
  REQUIRE(r.d.isApprox(vec2(0, -1), 1e-14));
  REQUIRE(r.y_next(0) == Approx(-1.0));
  REQUIRE(r.inertia.positive == 2);
  REQUIRE(r.inertia.negative == 1);
}

TEST_CASE("KKT: negative definite W is shifted to the correct inertia") {
  Matrix J{1, 2};
  J << 1, 0;
  const auto sys = system_from(J, Vector::Zero(1), vec2(1, 1));
  const Matrix W = -Matrix::Identity(2, 2);
  const auto r = inertia_correct_and_solve(W, sys, Vector::Zero(2));
  REQUIRE(r.shift > 1.0);
  const Matrix& Wm = r.W_used;
  Matrix K = Matrix::Zero(3, 3);
  K.topLeftCorner(2, 2) = Wm;
  K.topRightCorner(2, 1) = J.transpose();
  K.bottomLeftCorner(1, 2) = J;
  const auto in = testing::dense_inertia(K);
  REQUIRE(in.positive == 2);
  REQUIRE(in.negative == 1);
  REQUIRE(in.zero == 0);
}

TEST_CASE("KKT: shift limit raises KktFailure") {
  Matrix J{1, 2};
  J << 1, 0;
  const auto sys = system_from(J, Vector::Zero(1), vec2(1, 1));
  ShiftSchedule schedule;
  schedule.delta_max = 1e-2;
  REQUIRE_THROWS_AS(inertia_correct_and_solve(-Matrix::Identity(2, 2), sys,
                                              Vector::Zero(2), 1e-10,
                                              schedule),
                    KktFailure);
}

TEST_CASE("KKT: factorization inertia agrees with dense eigenvalues") {
  Rng rng{23};
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + trial % 6;
    Matrix A = random_matrix(rng, m, m);
    A = (0.5 * (A + A.transpose())).eval();
    SymmetricIndefiniteFactorization fact{A};
    const auto in = fact.inertia(1e-10);
    const auto oracle = testing::dense_inertia(A, 1e-10);
    REQUIRE(in.negative == oracle.negative);
    REQUIRE(in.positive == oracle.positive);
  }
}

TEST_CASE("KKT: random systems satisfy the step contracts") {
  Rng rng{31};
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 5;
    const int q = 1 + trial % 4;
    Vector s{q};
    Vector y{q};
    for (int i = 0; i < q; ++i) {
      s(i) = unif(rng);
      y(i) = unif(rng) - 1.0;
    }
    Matrix H = random_matrix(rng, n, n);
    H = (0.5 * (H + H.transpose())).eval();
    const auto sys = assemble(0.0, random_matrix(rng, n, 1),
                              random_matrix(rng, q, 1), random_matrix(rng, q, n),
                              s, 0.1);
    const auto normal = normal_step(sys, 1e3);
    const Matrix W = build_W(H, s, y, 0.1);
    const auto r = inertia_correct_and_solve(W, sys, normal.v);

    const Matrix& J = sys.J;
    REQUIRE((r.W_used * r.d + J.transpose() * r.y_next + sys.g).norm() <=
            1e-8 * (1 + sys.g.norm()));
    REQUIRE((J * r.d - J * normal.v).norm() <=
            1e-8 * (1 + (J * normal.v).norm()));
    REQUIRE((r.d - normal.v - r.u).norm() <= 1e-12 * (1 + r.d.norm()));
    REQUIRE(r.u.dot(r.W_used * r.u) >= 1e-10 * r.u.squaredNorm());
    REQUIRE(testing::reduced_hessian_min_eig(r.W_used, J) > 0.0);
    REQUIRE(std::abs((sys.c + J * r.d).norm() - (sys.c + J * normal.v).norm()) <=
            1e-8 * (1 + sys.c.norm()));
  }
}

TEST_CASE("KKT: tiny tangential curvature forces a shift") {
  // Σ at its lower clamp leaves curvature 1e-14 on null(J).
  Matrix J{1, 3};
  J << 1, 0, 0;
  Matrix W = Matrix::Zero(3, 3);
  W(1, 1) = 1.0;
  W(2, 2) = 1e-14;
  Vector g{3};
  g << 0, 0, -1;
  const auto sys = system_from(J, Vector::Zero(1), g);
  const auto r = inertia_correct_and_solve(W, sys, Vector::Zero(3));
  REQUIRE(r.shift > 0.0);
  REQUIRE(r.u.dot(r.W_used * r.u) >= 1e-10 * r.u.squaredNorm());
}
