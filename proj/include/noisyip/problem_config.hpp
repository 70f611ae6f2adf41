// Copyright (c) noisyip contributors

#pragma once

#include <string>

#include "noisyip/problem.hpp"

namespace noisyip {

/**
 * Run configuration read from JSON:
 *
 *   {
 *     "problem": "hs35",
 *     "scaling": true,
 *     "noise": {"eps_f": 1e-2, "eps_c": 1e-2, "eps_g": 0.1, "eps_J": 0.1,
 *               "eps_H": 0.1, "seed": 7, "keying": "per_iteration"}
 *   }
 *
 * Missing noise bounds default to zero, except that when only "level" is
 * given the bounds follow NoiseSpec::from_level(). "keying" is either
 * "per_iteration" (default) or "hash_of_point".
 */
struct ProblemConfig {
  std::string problem;
  bool scaling = true;
  NoiseSpec noise;
};

ProblemConfig parse_problem_config(const std::string& json_text);
ProblemConfig load_problem_config(const std::string& path);
std::string to_json(const ProblemConfig& config);

NoiseKeying parse_keying(const std::string& name);
std::string keying_name(NoiseKeying keying);

}  // namespace noisyip
