// Copyright (c) noisyip contributors

#include "noisyip/suite.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace noisyip {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v{static_cast<Eigen::Index>(values.size())};
  Eigen::Index i = 0;
  for (double value : values) {
    v(i++) = value;
  }
  return v;
}

/// Problem with linear constraints A x ≤ b.
struct LinearConstraints {
  Matrix A;
  Vector b;
};

void set_linear_constraints(TrueProblem& p, const LinearConstraints& lc) {
  p.q = static_cast<int>(lc.A.rows());
  p.c_i = [lc](const Vector& x) -> Vector { return lc.A * x - lc.b; };
  p.j_i = [A = lc.A](const Vector&) -> Matrix { return A; };
}

/// ½xᵀQx + pᵀx + r objective.
void set_quadratic_objective(TrueProblem& p, const Matrix& Q, const Vector& lin,
                             double r) {
  p.f0 = [Q, lin, r](const Vector& x) {
    return 0.5 * x.dot(Q * x) + lin.dot(x) + r;
  };
  p.g0 = [Q, lin](const Vector& x) -> Vector { return Q * x + lin; };
  p.lagrangian_hessian = [Q](const Vector&, const Vector&) -> Matrix {
    return Q;
  };
}

SuiteProblem lp2() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "lp2";
  p.n = 2;
  Matrix A{4, 2};
  A << 1, 2, 3, 1, -1, 0, 0, -1;
  set_linear_constraints(p, {A, vec({4, 6, 0, 0})});
  set_quadratic_objective(p, Matrix::Zero(2, 2), vec({-1, -1}), 0.0);
  p.x0 = vec({0.5, 0.5});
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({1.6, 1.2});
  sp.optimal_value = -2.8;
  return sp;
}

SuiteProblem qp_proj() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "qp_proj";
  p.n = 2;
  Matrix A{2, 2};
  A << 1, 1, -1, 0;
  set_linear_constraints(p, {A, vec({2, 0})});
  // (x₁ − 2)² + (x₂ − 1)²
  set_quadratic_objective(p, 2.0 * Matrix::Identity(2, 2), vec({-4, -2}), 5.0);
  p.x0 = vec({0, 0});
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({1.5, 0.5});
  sp.optimal_value = 0.5;
  return sp;
}

SuiteProblem hs21() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "hs21";
  p.n = 2;
  Matrix A{5, 2};
  A << -10, 1, -1, 0, 1, 0, 0, -1, 0, 1;
  set_linear_constraints(p, {A, vec({-10, -2, 50, 50, 50})});
  Matrix Q = Matrix::Zero(2, 2);
  Q.diagonal() << 0.02, 2.0;
  set_quadratic_objective(p, Q, Vector::Zero(2), -100.0);
  p.x0 = vec({-1, -1});
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({2, 0});
  sp.optimal_value = -99.96;
  return sp;
}

SuiteProblem hs35() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "hs35";
  p.n = 3;
  Matrix A{4, 3};
  A << 1, 1, 2, -1, 0, 0, 0, -1, 0, 0, 0, -1;
  set_linear_constraints(p, {A, vec({3, 0, 0, 0})});
  Matrix Q{3, 3};
  Q << 4, 2, 2, 2, 4, 0, 2, 0, 2;
  set_quadratic_objective(p, Q, vec({-8, -6, -4}), 9.0);
  p.x0 = Vector::Constant(3, 0.5);
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({4.0 / 3.0, 7.0 / 9.0, 4.0 / 9.0});
  sp.optimal_value = 1.0 / 9.0;
  return sp;
}

SuiteProblem hs76() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "hs76";
  p.n = 4;
  Matrix A{7, 4};
  A << 1, 2, 1, 1,     //
      3, 1, 2, -1,     //
      0, -1, -4, 0,    //
      -1, 0, 0, 0,     //
      0, -1, 0, 0,     //
      0, 0, -1, 0,     //
      0, 0, 0, -1;
  set_linear_constraints(p, {A, vec({5, 4, -1.5, 0, 0, 0, 0})});
  Matrix Q{4, 4};
  Q << 2, 0, -1, 0, 0, 1, 0, 0, -1, 0, 2, 1, 0, 0, 1, 1;
  set_quadratic_objective(p, Q, vec({-1, -3, 1, -1}), 0.0);
  p.x0 = Vector::Constant(4, 0.5);
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({3.0 / 11.0, 23.0 / 11.0, 0.0, 6.0 / 11.0});
  sp.optimal_value = -4.681818181818182;
  return sp;
}

SuiteProblem disk_linear() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "disk_linear";
  p.n = 2;
  p.q = 1;
  p.f0 = [](const Vector& x) { return x(0) + x(1); };
  p.g0 = [](const Vector&) -> Vector { return vec({1, 1}); };
  p.c_i = [](const Vector& x) -> Vector {
    return vec({x.squaredNorm() - 1.0});
  };
  p.j_i = [](const Vector& x) -> Matrix { return 2.0 * x.transpose(); };
  p.lagrangian_hessian = [](const Vector&, const Vector& y) -> Matrix {
    return 2.0 * y(0) * Matrix::Identity(2, 2);
  };
  p.x0 = vec({0.3, 0.2});
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = -std::sqrt(0.5) * Vector::Ones(2);
  sp.optimal_value = -std::sqrt(2.0);
  return sp;
}

// Rosen–Suzuki.
SuiteProblem hs43() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "hs43";
  p.n = 4;
  p.q = 3;
  p.f0 = [](const Vector& x) {
    return x(0) * x(0) + x(1) * x(1) + 2 * x(2) * x(2) + x(3) * x(3) -
           5 * x(0) - 5 * x(1) - 21 * x(2) + 7 * x(3);
  };
  p.g0 = [](const Vector& x) -> Vector {
    return vec({2 * x(0) - 5, 2 * x(1) - 5, 4 * x(2) - 21, 2 * x(3) + 7});
  };
  p.c_i = [](const Vector& x) -> Vector {
    const double a = x(0), b = x(1), c = x(2), d = x(3);
    return vec({a * a + b * b + c * c + d * d + a - b + c - d - 8,
                a * a + 2 * b * b + c * c + 2 * d * d - a - d - 10,
                2 * a * a + b * b + c * c + 2 * a - b - d - 5});
  };
  p.j_i = [](const Vector& x) -> Matrix {
    const double a = x(0), b = x(1), c = x(2), d = x(3);
    Matrix J{3, 4};
    J << 2 * a + 1, 2 * b - 1, 2 * c + 1, 2 * d - 1,  //
        2 * a - 1, 4 * b, 2 * c, 4 * d - 1,           //
        4 * a + 2, 2 * b - 1, 2 * c, -1;
    return J;
  };
  p.lagrangian_hessian = [](const Vector&, const Vector& y) -> Matrix {
    Vector diag = vec({2, 2, 4, 2});
    diag += y(0) * vec({2, 2, 2, 2});
    diag += y(1) * vec({2, 4, 2, 4});
    diag += y(2) * vec({4, 2, 2, 0});
    return diag.asDiagonal();
  };
  p.x0 = Vector::Zero(4);
  sp.problem_class = ProblemClass::kConvex;
  sp.solution = vec({0, 1, 2, -1});
  sp.optimal_value = -44.0;
  return sp;
}

SuiteProblem chain_qp() {
  constexpr int n = 10;
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "chain_qp";
  p.n = n;
  Matrix A = Matrix::Zero(n - 1, n);
  for (int i = 0; i < n - 1; ++i) {
    A(i, i) = 1.0;
    A(i, i + 1) = 1.0;
  }
  set_linear_constraints(p, {A, Vector::Constant(n - 1, 1.5)});
  Vector a{n};
  for (int i = 0; i < n; ++i) {
    a(i) = 1.0 + 0.1 * (i + 1);
  }
  // ½‖x − a‖²
  set_quadratic_objective(p, Matrix::Identity(n, n), -a, 0.5 * a.squaredNorm());
  p.x0 = Vector::Zero(n);
  sp.problem_class = ProblemClass::kConvex;
  return sp;
}

SuiteProblem rosenbrock_disk() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "rosenbrock_disk";
  p.n = 2;
  p.q = 1;
  p.f0 = [](const Vector& x) {
    const double r = x(1) - x(0) * x(0);
    return 100.0 * r * r + (1.0 - x(0)) * (1.0 - x(0));
  };
  p.g0 = [](const Vector& x) -> Vector {
    const double r = x(1) - x(0) * x(0);
    return vec({-400.0 * x(0) * r - 2.0 * (1.0 - x(0)), 200.0 * r});
  };
  p.c_i = [](const Vector& x) -> Vector {
    return vec({x.squaredNorm() - 1.0});
  };
  p.j_i = [](const Vector& x) -> Matrix { return 2.0 * x.transpose(); };
  p.lagrangian_hessian = [](const Vector& x, const Vector& y) -> Matrix {
    Matrix H{2, 2};
    H << 1200.0 * x(0) * x(0) - 400.0 * x(1) + 2.0, -400.0 * x(0),
        -400.0 * x(0), 200.0;
    H.diagonal().array() += 2.0 * y(0);
    return H;
  };
  p.x0 = vec({-1.2, 1.0});
  sp.problem_class = ProblemClass::kNonconvex;
  sp.solution = vec({0.7864151541684903, 0.6176983125233985});
  return sp;
}

SuiteProblem bilinear() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "bilinear";
  p.n = 2;
  Matrix A{3, 2};
  A << 1, 1, -1, 0, 0, -1;
  set_linear_constraints(p, {A, vec({2, 0, 0})});
  Matrix Q{2, 2};
  Q << 0, -1, -1, 0;
  set_quadratic_objective(p, Q, Vector::Zero(2), 0.0);
  p.x0 = vec({0.5, 0.2});
  sp.problem_class = ProblemClass::kNonconvex;
  sp.solution = vec({1, 1});
  sp.optimal_value = -1.0;
  return sp;
}

// No multiplier exists at the minimizer (1, 0): both constraint gradients
// are vertical there.
SuiteProblem cusp_degenerate() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "cusp_degenerate";
  p.n = 2;
  p.q = 2;
  p.f0 = [](const Vector& x) { return -x(0); };
  p.g0 = [](const Vector&) -> Vector { return vec({-1, 0}); };
  p.c_i = [](const Vector& x) -> Vector {
    const double t = 1.0 - x(0);
    return vec({x(1) - t * t * t, -x(1)});
  };
  p.j_i = [](const Vector& x) -> Matrix {
    const double t = 1.0 - x(0);
    Matrix J{2, 2};
    J << 3.0 * t * t, 1.0, 0.0, -1.0;
    return J;
  };
  p.lagrangian_hessian = [](const Vector& x, const Vector& y) -> Matrix {
    Matrix H = Matrix::Zero(2, 2);
    H(0, 0) = -6.0 * (1.0 - x(0)) * y(0);
    return H;
  };
  p.x0 = vec({0.5, 0.5});
  sp.problem_class = ProblemClass::kDegenerate;
  sp.solution = vec({1, 0});
  sp.optimal_value = -1.0;
  return sp;
}

SuiteProblem infeasible_parabola() {
  SuiteProblem sp;
  TrueProblem& p = sp.problem;
  p.name = "infeasible_parabola";
  p.n = 1;
  p.q = 1;
  p.f0 = [](const Vector& x) { return x(0); };
  p.g0 = [](const Vector&) -> Vector { return vec({1}); };
  p.c_i = [](const Vector& x) -> Vector { return vec({x(0) * x(0) + 1.0}); };
  p.j_i = [](const Vector& x) -> Matrix {
    Matrix J{1, 1};
    J(0, 0) = 2.0 * x(0);
    return J;
  };
  p.lagrangian_hessian = [](const Vector&, const Vector& y) -> Matrix {
    Matrix H{1, 1};
    H(0, 0) = 2.0 * y(0);
    return H;
  };
  p.x0 = vec({2.0});
  sp.problem_class = ProblemClass::kInfeasible;
  return sp;
}

using Factory = SuiteProblem (*)();

const std::vector<std::pair<std::string, Factory>>& registry() {
  static const std::vector<std::pair<std::string, Factory>> kRegistry = {
      {"lp2", lp2},
      {"qp_proj", qp_proj},
      {"hs21", hs21},
      {"hs35", hs35},
      {"hs76", hs76},
      {"disk_linear", disk_linear},
      {"hs43", hs43},
      {"chain_qp", chain_qp},
      {"rosenbrock_disk", rosenbrock_disk},
      {"bilinear", bilinear},
      {"cusp_degenerate", cusp_degenerate},
      {"infeasible_parabola", infeasible_parabola},
  };
  return kRegistry;
}

}  // namespace

std::string class_name(ProblemClass c) {
  switch (c) {
    case ProblemClass::kConvex:
      return "convex";
    case ProblemClass::kNonconvex:
      return "nonconvex";
    case ProblemClass::kDegenerate:
      return "degenerate";
    case ProblemClass::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

std::vector<std::string> problem_names() {
  std::vector<std::string> names;
  for (const auto& [name, factory] : registry()) {
    names.push_back(name);
  }
  return names;
}

SuiteProblem suite_problem(const std::string& name) {
  for (const auto& [key, factory] : registry()) {
    if (key == name) {
      return factory();
    }
  }
  throw std::invalid_argument("unknown problem: " + name);
}

TrueProblem make_problem(const std::string& name) {
  return suite_problem(name).problem;
}

std::vector<std::string> suite(const std::string& name) {
  if (name == "default") {
    return problem_names();
  }
  if (name == "convex" || name == "nondegenerate") {
    std::vector<std::string> out;
    for (const auto& [key, factory] : registry()) {
      const ProblemClass c = factory().problem_class;
      const bool keep = name == "convex"
                            ? c == ProblemClass::kConvex
                            : c == ProblemClass::kConvex ||
                                  c == ProblemClass::kNonconvex;
      if (keep) {
        out.push_back(key);
      }
    }
    return out;
  }
  for (const auto& [key, factory] : registry()) {
    if (key == name) {
      return {key};
    }
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace noisyip
