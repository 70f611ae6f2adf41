// Copyright (c) noisyip contributors

#include "noisyip/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "noisyip/barrier.hpp"
#include "noisyip/kkt.hpp"
#include "noisyip/suite.hpp"
#include "noisyip/trace_io.hpp"
#include "noisyip/trust_region.hpp"

namespace noisyip {

namespace {

constexpr double kLogFloor = 1e-300;

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Matrix> svd{A};
  return svd.singularValues()(0);
}

std::string short_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out{path};
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << text;
}

bool within(double err, double bound) {
  return err <= bound * (1.0 + 1e-12) + 1e-14 * (1.0 + bound);
}

}  // namespace

DiagnosticsHook true_measures_hook() {
  return [](const DiagnosticsInput& in, IterationRecord& rec) {
    const Vector y = Vector::Zero(in.oracle.q());
    const NoisyEvaluation tru = in.oracle.evaluate_true(in.x, y);

    rec.err_f = std::abs(in.eval.f0 - tru.f0);
    rec.err_c = (in.eval.c_i - tru.c_i).norm();
    rec.err_g = (in.eval.g0 - tru.g0).norm();
    rec.err_J = spectral_norm(in.eval.j_i - tru.j_i);

    ScaledSystem sys;
    try {
      sys = assemble(tru, in.s, in.mu);
    } catch (const std::exception&) {
      return;
    }
    rec.stat_infeas_true = (sys.J.transpose() * sys.c).norm();
    try {
      const TrustRegionResult normal =
          normal_step(sys, in.config.omega, in.config.tol_tr);
      const KktResult kkt = inertia_correct_and_solve(
          in.W, sys, normal.v, in.config.pd_tol);
      const double grad_lag = (sys.g + sys.J.transpose() * kkt.y_next).norm();
      rec.stat_kkt_true = std::max(grad_lag, sys.c.norm());
    } catch (const KktFailure&) {
      rec.stat_kkt_true = std::numeric_limits<double>::quiet_NaN();
    }
  };
}

double geometric_mean_tail(const std::vector<double>& values,
                           std::size_t window) {
  if (values.empty() || window == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const std::size_t count = std::min(window, values.size());
  double log_sum = 0.0;
  for (std::size_t i = values.size() - count; i < values.size(); ++i) {
    log_sum += std::log(std::max(values[i], kLogFloor));
  }
  return std::exp(log_sum / static_cast<double>(count));
}

std::string cell_stem(const std::string& problem, double mu, double eps_f,
                      std::uint64_t seed) {
  return problem + "_mu" + short_double(mu) + "_eps" + short_double(eps_f) +
         "_seed" + std::to_string(seed);
}

CellResult run_cell(const std::string& problem, double mu, double eps_f,
                    std::uint64_t seed, const ExperimentGrid& grid) {
  CellResult cell;
  RunSummary& sum = cell.summary;
  sum.problem = problem;
  sum.mu = mu;
  sum.eps_f = eps_f;
  sum.seed = seed;

  try {
    TrueProblem tp = make_problem(problem);
    if (grid.scaling) {
      tp = scale_problem(tp);
    }
    NoiseSpec noise = NoiseSpec::from_level(eps_f, seed);
    noise.keying = grid.keying;
    const NoisyOracle oracle{std::move(tp), noise};

    SolverConfig config = SolverConfig::with_noise(noise, mu);
    config.max_iter = grid.max_iter;
    config.time_limit = grid.time_limit;
    config.tol_term = grid.tol_term;
    const DiagnosticsHook hook = true_measures_hook();

    if (grid.continuation) {
      config.continuation.enabled = true;
      config.continuation.mu_min = std::min(config.continuation.mu_min, mu);
      std::vector<SolveResult> parts = continuation_loop(oracle, config, hook);
      cell.result = parts.back();
      cell.result.trace = merged_trace(parts);
      cell.result.wall_time = 0.0;
      for (const auto& part : parts) {
        cell.result.wall_time += part.wall_time;
      }
    } else {
      cell.result = solve_barrier_subproblem(
          oracle, config, initial_state(oracle, config), hook);
    }

    const auto& trace = cell.result.trace;
    std::vector<double> kkt_n, inf_n, kkt_t, inf_t;
    for (const auto& rec : trace) {
      kkt_n.push_back(rec.stat_kkt_noisy);
      inf_n.push_back(rec.stat_infeas_noisy);
      kkt_t.push_back(rec.stat_kkt_true);
      inf_t.push_back(rec.stat_infeas_true);
      sum.violation_mask |= rec.violations;
      sum.max_err_f = std::max(sum.max_err_f, rec.err_f);
      sum.max_err_c = std::max(sum.max_err_c, rec.err_c);
      sum.max_err_g = std::max(sum.max_err_g, rec.err_g);
      sum.max_err_J = std::max(sum.max_err_J, rec.err_J);
    }
    sum.geo_kkt_noisy = geometric_mean_tail(kkt_n);
    sum.geo_infeas_noisy = geometric_mean_tail(inf_n);
    sum.geo_kkt_true = geometric_mean_tail(kkt_t);
    sum.geo_infeas_true = geometric_mean_tail(inf_t);
    sum.noise_bounds_ok = within(sum.max_err_f, noise.eps_f) &&
                          within(sum.max_err_c, noise.eps_c) &&
                          within(sum.max_err_g, noise.eps_g) &&
                          within(sum.max_err_J, noise.eps_J);
    sum.status = status_name(cell.result.status);
    sum.message = cell.result.message;
    sum.iters = cell.result.iterations();
    sum.wall_time = cell.result.wall_time;
    sum.violations = cell.result.violation_count();
  } catch (const std::exception& e) {
    sum.status = status_name(SolveStatus::kFailure);
    sum.message = e.what();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sum.geo_kkt_noisy = sum.geo_infeas_noisy = nan;
    sum.geo_kkt_true = sum.geo_infeas_true = nan;
  }
  return cell;
}

std::vector<RunSummary> run_grid(const ExperimentGrid& grid,
                                 int parallelism) {
  struct Cell {
    std::string problem;
    double mu;
    double eps_f;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& p : grid.problems) {
    make_problem(p);  // unknown names fail before any work starts
    for (double mu : grid.mus) {
      for (double eps : grid.noise_levels) {
        for (std::uint64_t seed : grid.seeds) {
          cells.push_back({p, mu, eps, seed});
        }
      }
    }
  }

  std::filesystem::path out_dir;
  if (!grid.out_dir.empty()) {
    out_dir = grid.out_dir;
    std::filesystem::create_directories(out_dir / "traces");
    std::filesystem::create_directories(out_dir / "summaries");
    std::filesystem::create_directories(out_dir / "profiles");
  }

  std::vector<RunSummary> summaries(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) {
        return;
      }
      const Cell& c = cells[i];
      CellResult cell = run_cell(c.problem, c.mu, c.eps_f, c.seed, grid);
      if (!out_dir.empty()) {
        const std::string stem = cell_stem(c.problem, c.mu, c.eps_f, c.seed);
        const auto trace_path = out_dir / "traces" / (stem + ".csv");
        save_trace_csv(trace_path.string(), cell.result.trace);
        cell.summary.trace_file = trace_path.string();
        write_file(out_dir / "summaries" / (stem + ".json"),
                   run_summary_json(cell.summary));
      }
      summaries[i] = std::move(cell.summary);
    }
  };

  const int threads = std::max(1, parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  if (!out_dir.empty()) {
    const auto thresholds = default_thresholds();
    for (double mu : grid.mus) {
      for (double eps : grid.noise_levels) {
        std::vector<RunSummary> subset;
        for (const auto& s : summaries) {
          if (s.mu == mu && s.eps_f == eps) {
            subset.push_back(s);
          }
        }
        for (auto m : {ProfileMeasure::kKktNoisy, ProfileMeasure::kInfeasNoisy,
                       ProfileMeasure::kKktTrue, ProfileMeasure::kInfeasTrue}) {
          const std::string name = "profile_mu" + short_double(mu) + "_eps" +
                                   short_double(eps) + "_" +
                                   profile_measure_name(m) + ".csv";
          write_file(out_dir / "profiles" / name,
                     profile_csv(profile(subset, m, thresholds)));
        }
      }
    }
  }
  return summaries;
}

ProfileMeasure parse_profile_measure(const std::string& name) {
  if (name == "kkt_noisy") {
    return ProfileMeasure::kKktNoisy;
  }
  if (name == "infeas_noisy") {
    return ProfileMeasure::kInfeasNoisy;
  }
  if (name == "kkt_true") {
    return ProfileMeasure::kKktTrue;
  }
  if (name == "infeas_true") {
    return ProfileMeasure::kInfeasTrue;
  }
  throw std::invalid_argument("unknown profile measure: " + name);
}

std::string profile_measure_name(ProfileMeasure measure) {
  switch (measure) {
    case ProfileMeasure::kKktNoisy:
      return "kkt_noisy";
    case ProfileMeasure::kInfeasNoisy:
      return "infeas_noisy";
    case ProfileMeasure::kKktTrue:
      return "kkt_true";
    case ProfileMeasure::kInfeasTrue:
      return "infeas_true";
  }
  return "unknown";
}

double measure_value(const RunSummary& summary, ProfileMeasure measure) {
  switch (measure) {
    case ProfileMeasure::kKktNoisy:
      return summary.geo_kkt_noisy;
    case ProfileMeasure::kInfeasNoisy:
      return summary.geo_infeas_noisy;
    case ProfileMeasure::kKktTrue:
      return summary.geo_kkt_true;
    case ProfileMeasure::kInfeasTrue:
      return summary.geo_infeas_true;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::pair<double, double>> profile(
    const std::vector<RunSummary>& summaries, ProfileMeasure measure,
    const std::vector<double>& thresholds) {
  std::vector<std::pair<double, double>> table;
  if (summaries.empty()) {
    if (!thresholds.empty()) {
      throw std::invalid_argument("profile: no summaries");
    }
    return table;
  }
  for (double t : thresholds) {
    int below = 0;
    for (const auto& s : summaries) {
      // NaN (failed run) never counts as solved.
      if (measure_value(s, measure) <= t) {
        ++below;
      }
    }
    table.emplace_back(t, 100.0 * below / static_cast<double>(summaries.size()));
  }
  return table;
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int e = -8; e <= 2; ++e) {
    t.push_back(std::pow(10.0, e));
  }
  return t;
}

std::string profile_csv(const std::vector<std::pair<double, double>>& table) {
  std::string out = "threshold,percent\n";
  for (const auto& [t, pct] : table) {
    out += format_double(t) + "," + format_double(pct) + "\n";
  }
  return out;
}

std::string run_summary_json(const RunSummary& s) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) {
      return v;
    }
    return nullptr;
  };
  nlohmann::json j = {
      {"problem", s.problem},
      {"mu", s.mu},
      {"eps_f", s.eps_f},
      {"seed", s.seed},
      {"geo_kkt_noisy", num(s.geo_kkt_noisy)},
      {"geo_infeas_noisy", num(s.geo_infeas_noisy)},
      {"geo_kkt_true", num(s.geo_kkt_true)},
      {"geo_infeas_true", num(s.geo_infeas_true)},
      {"status", s.status},
      {"message", s.message},
      {"iters", s.iters},
      {"wall_time", s.wall_time},
      {"violations", s.violations},
      {"violation_kinds", describe_violations(s.violation_mask)},
      {"max_err_f", s.max_err_f},
      {"max_err_c", s.max_err_c},
      {"max_err_g", s.max_err_g},
      {"max_err_J", s.max_err_J},
      {"noise_bounds_ok", s.noise_bounds_ok},
  };
  return j.dump(2);
}

}  // namespace noisyip
