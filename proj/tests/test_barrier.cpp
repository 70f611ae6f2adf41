// Copyright (c) noisyip contributors

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/SVD>

#include "noisyip/barrier.hpp"

using namespace noisyip;
using Catch::Approx;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Vector v2(double a, double b) {
  Vector v{2};
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("assemble builds the scaled system") {
  SECTION("unit slacks leave f unchanged") {
    const auto sys = assemble(2.0, v2(1, 2), v2(0, 0), Matrix::Zero(2, 2),
                              v2(1, 1), 0.1);
    REQUIRE(sys.f == 2.0);
  }
  SECTION("slack block of g is −μ") {
    const auto sys = assemble(0.0, v2(1, 2), v2(0, 0), Matrix::Zero(2, 2),
                              v2(1, 1), 0.1);
    Vector expected{4};
    expected << 1, 2, -0.1, -0.1;
    REQUIRE(sys.g == expected);
  }
  SECTION("J = [J_I S]") {
    Matrix JI{1, 2};
    JI << 1, 0;
    const auto sys = assemble(0.0, v2(0, 0), v1(-1.0), JI, v1(3.0), 0.5);
    Matrix expected{1, 3};
    expected << 1, 0, 3;
    REQUIRE(sys.J == expected);
    REQUIRE(sys.c(0) == 2.0);
    REQUIRE(sys.f == Approx(-0.5 * std::log(3.0)));
    REQUIRE(sys.n() == 2);
    REQUIRE(sys.q() == 1);
  }
  SECTION("nonpositive slack is a domain error") {
    REQUIRE_THROWS_AS(assemble(0.0, v2(0, 0), v1(0.0), Matrix::Zero(1, 2),
                               v1(0.0), 0.1),
                      std::domain_error);
    REQUIRE_THROWS_AS(barrier_objective(0.0, v2(1.0, -1e-300), 0.1),
                      std::domain_error);
  }
}

TEST_CASE("J has full row rank whenever s > 0") {
  Rng rng{5};
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix JI = Matrix::Zero(4, 3);
    if (trial % 2 == 0) {
      for (Eigen::Index i = 0; i < JI.size(); ++i) {
        JI.data()[i] = normal(rng);
      }
    }
    Vector s = Vector::Constant(4, 1e-3 + trial * 0.1);
    const auto sys = assemble(0.0, Vector::Zero(3), Vector::Zero(4), JI, s,
                              0.1);
    const Vector sv = Eigen::JacobiSVD<Matrix>(sys.J).singularValues();
    REQUIRE(sv.minCoeff() > 0.0);
  }
}

TEST_CASE("barrier objective decreases as a slack grows") {
  Rng rng{6};
  std::uniform_real_distribution<double> unif(0.01, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector s{3};
    s << unif(rng), unif(rng), unif(rng);
    Vector s2 = s;
    s2(trial % 3) += unif(rng);
    REQUIRE(barrier_objective(1.0, s2, 0.1) < barrier_objective(1.0, s, 0.1));
  }
}

TEST_CASE("init_slacks examples") {
  REQUIRE(init_slacks(v1(-3.0))(0) == 3.0);
  REQUIRE(init_slacks(v1(0.5))(0) == 1.0);
  REQUIRE(init_slacks(v1(-1.0))(0) == 1.0);
  const Vector c = v2(-3.0, 0.5);
  const Vector s = init_slacks(c);
  REQUIRE((c + s).minCoeff() >= 0.0);
  REQUIRE(s.minCoeff() > 0.0);
}

TEST_CASE("slack_reset examples") {
  REQUIRE(slack_reset(v1(0.2), v1(-0.5))(0) == 0.5);
  REQUIRE(slack_reset(v1(0.2), v1(0.3))(0) == 0.2);
  // Floor keeps the slack strictly positive.
  REQUIRE(slack_reset(v1(1e-20), v1(0.0))(0) == kSlackFloor);
}

TEST_CASE("slack_reset never shrinks a slack and restores c ≥ 0") {
  Rng rng{7};
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector s{4};
    Vector c{4};
    for (int i = 0; i < 4; ++i) {
      s(i) = std::abs(unif(rng)) + 1e-6;
      c(i) = unif(rng);
    }
    const Vector r = slack_reset(s, c);
    REQUIRE((r.array() >= s.array()).all());
    REQUIRE((c + r).minCoeff() >= 0.0);
  }
}

TEST_CASE("slack reset does not increase the merit function") {
  Rng rng{8};
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector s{3};
    Vector c_i{3};
    for (int i = 0; i < 3; ++i) {
      s(i) = std::abs(unif(rng)) + 1e-3;
      c_i(i) = unif(rng);
    }
    const double tau = 0.1;
    const double mu = 0.05;
    const double f0 = unif(rng);
    auto phi = [&](const Vector& slack) {
      return tau * barrier_objective(f0, slack, mu) + (c_i + slack).norm();
    };
    REQUIRE(phi(slack_reset(s, c_i)) <= phi(s) + 1e-14);
  }
}
