// Copyright (c) noisyip contributors

#include "noisyip/problem_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace noisyip {

NoiseKeying parse_keying(const std::string& name) {
  if (name == "per_iteration") {
    return NoiseKeying::kPerIteration;
  }
  if (name == "hash_of_point") {
    return NoiseKeying::kHashOfPoint;
  }
  throw std::invalid_argument("unknown noise keying: " + name);
}

std::string keying_name(NoiseKeying keying) {
  return keying == NoiseKeying::kPerIteration ? "per_iteration"
                                              : "hash_of_point";
}

ProblemConfig parse_problem_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string{"problem config: "} + e.what());
  }
  if (!j.is_object() || !j.contains("problem")) {
    throw std::invalid_argument("problem config: missing \"problem\"");
  }

  ProblemConfig config;
  config.problem = j.at("problem").get<std::string>();
  config.scaling = j.value("scaling", true);

  if (j.contains("noise")) {
    const auto& nz = j.at("noise");
    const std::uint64_t seed = nz.value("seed", std::uint64_t{0});
    if (nz.contains("level")) {
      config.noise = NoiseSpec::from_level(nz.at("level").get<double>(), seed);
    }
    config.noise.seed = seed;
    config.noise.eps_f = nz.value("eps_f", config.noise.eps_f);
    config.noise.eps_c = nz.value("eps_c", config.noise.eps_c);
    config.noise.eps_g = nz.value("eps_g", config.noise.eps_g);
    config.noise.eps_J = nz.value("eps_J", config.noise.eps_J);
    config.noise.eps_H = nz.value("eps_H", config.noise.eps_H);
    if (nz.contains("keying")) {
      config.noise.keying = parse_keying(nz.at("keying").get<std::string>());
    }
  }
  config.noise.validate();
  return config;
}

ProblemConfig load_problem_config(const std::string& path) {
  std::ifstream in{path};
  if (!in) {
    throw std::runtime_error("cannot open problem config: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_config(buffer.str());
}

std::string to_json(const ProblemConfig& config) {
  nlohmann::json j;
  j["problem"] = config.problem;
  j["scaling"] = config.scaling;
  j["noise"] = {{"eps_f", config.noise.eps_f},
                {"eps_c", config.noise.eps_c},
                {"eps_g", config.noise.eps_g},
                {"eps_J", config.noise.eps_J},
                {"eps_H", config.noise.eps_H},
                {"seed", config.noise.seed},
                {"keying", keying_name(config.noise.keying)}};
  return j.dump(2);
}

}  // namespace noisyip
