// Copyright (c) noisyip contributors

#include "noisyip/problem.hpp"

#include <bit>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace noisyip {

namespace {

constexpr double kScaleTarget = 10.0;
// Norms within this relative margin of the target are left alone so that
// rescaling an already scaled problem is an exact no-op.
constexpr double kScaleMargin = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ splitmix64(v));
}

bool all_finite(const Vector& v) { return v.allFinite(); }

double scale_factor(double norm_inf) {
  if (norm_inf > kScaleTarget * (1.0 + kScaleMargin)) {
    return kScaleTarget / norm_inf;
  }
  return 1.0;
}

}  // namespace

bool ScalingInfo::applied() const {
  if (objective != 1.0) {
    return true;
  }
  for (Eigen::Index i = 0; i < constraints.size(); ++i) {
    if (constraints(i) != 1.0) {
      return true;
    }
  }
  return false;
}

NoiseSpec NoiseSpec::from_level(double level, std::uint64_t seed) {
  NoiseSpec spec;
  spec.eps_f = level;
  spec.eps_c = level;
  const double root = std::sqrt(level);
  spec.eps_g = root;
  spec.eps_J = root;
  spec.eps_H = root;
  spec.seed = seed;
  return spec;
}

bool NoiseSpec::is_zero() const {
  return eps_f == 0.0 && eps_c == 0.0 && eps_g == 0.0 && eps_J == 0.0 &&
         eps_H == 0.0;
}

void NoiseSpec::validate() const {
  for (double eps : {eps_f, eps_c, eps_g, eps_J, eps_H}) {
    if (!std::isfinite(eps) || eps < 0.0) {
      throw std::invalid_argument("noise bounds must be finite and >= 0");
    }
  }
}

Vector sample_ball(double radius, int dim, Rng& rng) {
  if (dim < 1) {
    throw std::invalid_argument("sample_ball: dim must be >= 1");
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("sample_ball: radius must be finite and >= 0");
  }
  Vector v = Vector::Zero(dim);
  if (radius == 0.0) {
    return v;
  }
  std::normal_distribution<double> normal;
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) {
      v(i) = normal(rng);
    }
    norm = v.norm();
  } while (norm == 0.0);
  std::uniform_real_distribution<double> unit;
  const double r = radius * std::pow(unit(rng), 1.0 / dim);
  v *= r / norm;
  // Guard against the last ulp pushing the norm past the radius.
  const double len = v.norm();
  if (len > radius) {
    v *= radius / len;
  }
  return v;
}

NoisyOracle::NoisyOracle(TrueProblem problem, NoiseSpec noise)
    : problem_{std::move(problem)}, noise_{noise} {
  noise_.validate();
  if (problem_.n < 1 || problem_.q < 0) {
    throw std::invalid_argument("problem dimensions must satisfy n >= 1, q >= 0");
  }
}

Rng NoisyOracle::stream_rng(const Vector& x, EvalKey key, Stream stream) const {
  std::uint64_t h = splitmix64(noise_.seed);
  if (noise_.keying == NoiseKeying::kPerIteration) {
    h = mix(h, static_cast<std::uint64_t>(key.k));
    h = mix(h, static_cast<std::uint64_t>(key.slot));
  } else {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      // +0.0 and -0.0 are the same point.
      const double xi = x(i) == 0.0 ? 0.0 : x(i);
      h = mix(h, std::bit_cast<std::uint64_t>(xi));
    }
  }
  h = mix(h, static_cast<std::uint64_t>(stream));
  return Rng{h};
}

void NoisyOracle::add_value_noise(const Vector& x, EvalKey key,
                                  NoisyValues& v) const {
  if (noise_.eps_f > 0.0) {
    Rng rng = stream_rng(x, key, Stream::kF);
    std::uniform_real_distribution<double> u{-noise_.eps_f, noise_.eps_f};
    v.f0 += u(rng);
  }
  if (noise_.eps_c > 0.0 && problem_.q > 0) {
    Rng rng = stream_rng(x, key, Stream::kC);
    v.c_i += sample_ball(noise_.eps_c, problem_.q, rng);
  }
}

void NoisyOracle::add_derivative_noise(const Vector& x, EvalKey key,
                                       NoisyEvaluation& e) const {
  if (noise_.eps_g > 0.0) {
    Rng rng = stream_rng(x, key, Stream::kG);
    e.g0 += sample_ball(noise_.eps_g, problem_.n, rng);
  }
  if (noise_.eps_J > 0.0 && problem_.q > 0) {
    // Each row's nonzeros are perturbed within a ball of radius ε_J/√q, so
    // ‖E‖₂ ≤ ‖E‖_F ≤ ε_J and the sparsity pattern is preserved.
    Rng rng = stream_rng(x, key, Stream::kJ);
    const double row_radius = noise_.eps_J / std::sqrt(double(problem_.q));
    std::vector<int> nonzeros;
    for (int i = 0; i < problem_.q; ++i) {
      nonzeros.clear();
      for (int j = 0; j < problem_.n; ++j) {
        if (e.j_i(i, j) != 0.0) {
          nonzeros.push_back(j);
        }
      }
      if (nonzeros.empty()) {
        continue;
      }
      const Vector delta =
          sample_ball(row_radius, static_cast<int>(nonzeros.size()), rng);
      for (std::size_t p = 0; p < nonzeros.size(); ++p) {
        e.j_i(i, nonzeros[p]) += delta(static_cast<Eigen::Index>(p));
      }
    }
  }
  if (noise_.eps_H > 0.0 && e.hessian.size() > 0) {
    Rng rng = stream_rng(x, key, Stream::kH);
    std::uniform_real_distribution<double> u{-noise_.eps_H, noise_.eps_H};
    for (int i = 0; i < problem_.n; ++i) {
      e.hessian(i, i) += u(rng);
    }
  }
}

NoisyValues NoisyOracle::evaluate_values(const Vector& x, EvalKey key) const {
  if (x.size() != problem_.n || !all_finite(x)) {
    throw std::invalid_argument("evaluate: x must be a finite n-vector");
  }
  NoisyValues v{problem_.f0(x), problem_.c_i(x)};
  add_value_noise(x, key, v);
  return v;
}

NoisyEvaluation NoisyOracle::evaluate(const Vector& x, EvalKey key) const {
  NoisyValues v = evaluate_values(x, key);
  NoisyEvaluation e;
  e.f0 = v.f0;
  e.c_i = std::move(v.c_i);
  e.g0 = problem_.g0(x);
  e.j_i = problem_.j_i(x);
  add_derivative_noise(x, key, e);
  return e;
}

NoisyEvaluation NoisyOracle::evaluate(const Vector& x, const Vector& y,
                                      EvalKey key) const {
  NoisyValues v = evaluate_values(x, key);
  NoisyEvaluation e;
  e.f0 = v.f0;
  e.c_i = std::move(v.c_i);
  e.g0 = problem_.g0(x);
  e.j_i = problem_.j_i(x);
  e.hessian = problem_.has_hessian() ? problem_.lagrangian_hessian(x, y)
                                     : Matrix::Zero(problem_.n, problem_.n);
  add_derivative_noise(x, key, e);
  return e;
}

NoisyEvaluation NoisyOracle::evaluate_true(const Vector& x,
                                           const Vector& y) const {
  NoisyEvaluation e;
  e.f0 = problem_.f0(x);
  e.c_i = problem_.c_i(x);
  e.g0 = problem_.g0(x);
  e.j_i = problem_.j_i(x);
  e.hessian = problem_.has_hessian() ? problem_.lagrangian_hessian(x, y)
                                     : Matrix::Zero(problem_.n, problem_.n);
  return e;
}

TrueProblem scale_problem(const TrueProblem& problem) {
  const Vector& x0 = problem.x0;
  const Vector g = problem.g0(x0);
  const Matrix jac = problem.j_i(x0);

  ScalingInfo step;
  step.constraints = Vector::Ones(problem.q);
  if (all_finite(g)) {
    step.objective = scale_factor(g.lpNorm<Eigen::Infinity>());
  } else {
    step.objective_failed = true;
  }
  for (int i = 0; i < problem.q; ++i) {
    const Vector row = jac.row(i).transpose();
    if (!all_finite(row)) {
      step.failed_rows.push_back(i);
      continue;
    }
    step.constraints(i) = scale_factor(row.lpNorm<Eigen::Infinity>());
  }

  const double a = step.objective;
  const Vector d = step.constraints;
  auto base = std::make_shared<const TrueProblem>(problem);

  TrueProblem scaled;
  scaled.name = problem.name;
  scaled.n = problem.n;
  scaled.q = problem.q;
  scaled.x0 = problem.x0;
  scaled.f0 = [base, a](const Vector& x) { return a * base->f0(x); };
  scaled.g0 = [base, a](const Vector& x) -> Vector { return a * base->g0(x); };
  scaled.c_i = [base, d](const Vector& x) -> Vector {
    return d.cwiseProduct(base->c_i(x));
  };
  scaled.j_i = [base, d](const Vector& x) -> Matrix {
    return d.asDiagonal() * base->j_i(x);
  };
  if (problem.has_hessian()) {
    // a∇²f + Σ yᵢdᵢ∇²cᵢ = a·H(x, D y / a) for a > 0.
    scaled.lagrangian_hessian = [base, a, d](const Vector& x,
                                             const Vector& y) -> Matrix {
      const Vector y_base = d.cwiseProduct(y) / a;
      return a * base->lagrangian_hessian(x, y_base);
    };
  }

  ScalingInfo total;
  total.objective = problem.scaling.objective * a;
  total.constraints = problem.scaling.constraints.size() == problem.q
                          ? Vector{problem.scaling.constraints.cwiseProduct(d)}
                          : d;
  total.failed_rows = step.failed_rows;
  total.objective_failed = step.objective_failed;
  scaled.scaling = std::move(total);
  return scaled;
}

}  // namespace noisyip
