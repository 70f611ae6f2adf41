// Copyright (c) noisyip contributors

#include "noisyip/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noisyip {

namespace {

void require_positive_slacks(const Vector& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s(i) > 0.0)) {
      throw std::domain_error("barrier undefined: slack must be positive");
    }
  }
}

}  // namespace

double barrier_objective(double f0, const Vector& s, double mu) {
  require_positive_slacks(s);
  double log_sum = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    log_sum += std::log(s(i));
  }
  return f0 - mu * log_sum;
}

ScaledSystem assemble(double f0, const Vector& g0, const Vector& c_i,
                      const Matrix& j_i, const Vector& s, double mu) {
  if (!(mu > 0.0)) {
    throw std::domain_error("barrier parameter must be positive");
  }
  const auto n = g0.size();
  const auto q = s.size();
  if (c_i.size() != q || j_i.rows() != q || j_i.cols() != n) {
    throw std::invalid_argument("assemble: inconsistent dimensions");
  }

  ScaledSystem sys;
  sys.f = barrier_objective(f0, s, mu);
  sys.c = c_i + s;
  sys.g.resize(n + q);
  sys.g.head(n) = g0;
  sys.g.tail(q).setConstant(-mu);
  sys.J.resize(q, n + q);
  sys.J.leftCols(n) = j_i;
  sys.J.rightCols(q) = s.asDiagonal();
  return sys;
}

Vector init_slacks(const Vector& c_i0, double s_min) {
  Vector s = Vector::Ones(c_i0.size());
  return slack_reset(s, c_i0, s_min);
}

Vector init_slacks(const NoisyOracle& oracle, const Vector& x0, double s_min) {
  return init_slacks(oracle.evaluate_values(x0, EvalKey{0, 0}).c_i, s_min);
}

Vector slack_reset(const Vector& s_cand, const Vector& c_i_next, double s_min) {
  Vector s{s_cand.size()};
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    s(i) = std::max({s_cand(i), -c_i_next(i), s_min});
  }
  return s;
}

}  // namespace noisyip
