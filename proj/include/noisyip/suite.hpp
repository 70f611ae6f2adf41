// Copyright (c) noisyip contributors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noisyip/problem.hpp"

namespace noisyip {

enum class ProblemClass { kConvex, kNonconvex, kDegenerate, kInfeasible };

std::string class_name(ProblemClass c);

/// Registry entry: the problem plus whatever reference data is known.
struct SuiteProblem {
  TrueProblem problem;
  ProblemClass problem_class = ProblemClass::kConvex;
  /// Minimizer of the original (unbarriered, unscaled) problem.
  std::optional<Vector> solution;
  std::optional<double> optimal_value;
};

/// Every registered problem name, in registry order.
std::vector<std::string> problem_names();

/// Throws std::invalid_argument for unknown names.
SuiteProblem suite_problem(const std::string& name);
TrueProblem make_problem(const std::string& name);

/**
 * Named problem lists: "default" (all 12), "convex", "nondegenerate"
 * (everything except the degenerate and infeasible instances), or a single
 * problem name. Throws std::invalid_argument otherwise.
 */
std::vector<std::string> suite(const std::string& name);

}  // namespace noisyip
