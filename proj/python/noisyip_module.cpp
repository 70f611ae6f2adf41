// Copyright (c) noisyip contributors

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "noisyip/barrier.hpp"
#include "noisyip/globalization.hpp"
#include "noisyip/harness.hpp"
#include "noisyip/problem.hpp"
#include "noisyip/solver.hpp"
#include "noisyip/suite.hpp"
#include "noisyip/trace_io.hpp"
#include "noisyip/trust_region.hpp"

namespace py = pybind11;
using namespace noisyip;

namespace {

template <typename Field>
py::array_t<double> column(const std::vector<IterationRecord>& trace,
                           Field field) {
  py::array_t<double> out(static_cast<py::ssize_t>(trace.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = static_cast<double>(trace[i].*field);
  }
  return out;
}

py::dict trace_dict(const std::vector<IterationRecord>& trace) {
  py::dict d;
  d["k"] = column(trace, &IterationRecord::k);
  d["tau"] = column(trace, &IterationRecord::tau);
  d["alpha_max"] = column(trace, &IterationRecord::alpha_max);
  d["alpha"] = column(trace, &IterationRecord::alpha);
  d["j"] = column(trace, &IterationRecord::j);
  d["dm"] = column(trace, &IterationRecord::dm);
  d["merit_noisy"] = column(trace, &IterationRecord::merit_noisy);
  d["stat_kkt_noisy"] = column(trace, &IterationRecord::stat_kkt_noisy);
  d["stat_infeas_noisy"] = column(trace, &IterationRecord::stat_infeas_noisy);
  d["stat_kkt_true"] = column(trace, &IterationRecord::stat_kkt_true);
  d["stat_infeas_true"] = column(trace, &IterationRecord::stat_infeas_true);
  d["shift"] = column(trace, &IterationRecord::shift);
  d["mu"] = column(trace, &IterationRecord::mu);
  d["violations"] = column(trace, &IterationRecord::violations);
  return d;
}

py::dict solve(const std::string& problem, double mu, double eps_f,
               std::optional<double> eps_c, std::uint64_t seed, int max_iter,
               double tol_term, bool continuation, double mu_min,
               bool scaling) {
  TrueProblem tp = make_problem(problem);
  if (scaling) {
    tp = scale_problem(tp);
  }
  NoiseSpec noise = NoiseSpec::from_level(eps_f, seed);
  noise.eps_c = eps_c.value_or(eps_f);
  const NoisyOracle oracle{std::move(tp), noise};
  SolverConfig config = SolverConfig::with_noise(noise, mu);
  config.max_iter = max_iter;
  config.tol_term = tol_term;
  const DiagnosticsHook hook = true_measures_hook();

  SolveResult result;
  {
    py::gil_scoped_release release;
    if (continuation) {
      config.continuation.enabled = true;
      config.continuation.mu_min = std::min(mu_min, mu);
      const auto parts = continuation_loop(oracle, config, hook);
      result = parts.back();
      result.trace = merged_trace(parts);
    } else {
      result = solve_barrier_subproblem(oracle, config,
                                        initial_state(oracle, config), hook);
    }
  }

  py::dict d;
  d["status"] = status_name(result.status);
  d["message"] = result.message;
  d["iterations"] = result.iterations();
  d["violations"] = result.violation_count();
  d["wall_time"] = result.wall_time;
  d["x"] = result.final_state.x;
  d["s"] = result.final_state.s;
  d["y"] = result.final_state.y;
  d["tau"] = result.final_state.tau;
  d["mu"] = result.final_state.mu;
  d["trace"] = trace_dict(result.trace);
  d["trace_csv"] = trace_csv(result.trace);
  return d;
}

py::dict summary_dict(const RunSummary& s) {
  py::dict d;
  d["problem"] = s.problem;
  d["mu"] = s.mu;
  d["eps_f"] = s.eps_f;
  d["seed"] = s.seed;
  d["geo_kkt_noisy"] = s.geo_kkt_noisy;
  d["geo_infeas_noisy"] = s.geo_infeas_noisy;
  d["geo_kkt_true"] = s.geo_kkt_true;
  d["geo_infeas_true"] = s.geo_infeas_true;
  d["status"] = s.status;
  d["iters"] = s.iters;
  d["wall_time"] = s.wall_time;
  d["violations"] = s.violations;
  d["noise_bounds_ok"] = s.noise_bounds_ok;
  return d;
}

}  // namespace

PYBIND11_MODULE(_noisyip, m) {
  m.doc() = "Noise-tolerant line-search interior-point solver";

  m.def("problems", &problem_names);
  m.def("suite", &suite, py::arg("name") = "default");

  m.def("solve", &solve, py::arg("problem"), py::arg("mu") = 0.1,
        py::arg("eps_f") = 0.0, py::arg("eps_c") = py::none(),
        py::arg("seed") = 0, py::arg("max_iter") = 2000,
        py::arg("tol_term") = 0.0, py::arg("continuation") = false,
        py::arg("mu_min") = 1e-6, py::arg("scaling") = true,
        "Solve one registered problem; returns a dict with numpy trace "
        "columns.");

  m.def(
      "solve_trust_region",
      [](const Matrix& H, const Vector& b, double delta, double tol) {
        const auto sol = solve_trust_region(H, b, delta, tol);
        return py::make_tuple(sol.t, sol.lambda, sol.on_boundary);
      },
      py::arg("H"), py::arg("b"), py::arg("delta"), py::arg("tol") = 1e-12,
      "Returns (t, lambda, on_boundary).");

  m.def(
      "sample_ball",
      [](double radius, int dim, std::uint64_t seed) {
        Rng rng{seed};
        return sample_ball(radius, dim, rng);
      },
      py::arg("radius"), py::arg("dim"), py::arg("seed") = 0);

  m.def("fraction_to_boundary", &fraction_to_boundary, py::arg("ds"),
        py::arg("eta_s"));
  m.def("slack_reset", &slack_reset, py::arg("s_cand"), py::arg("c_i_next"),
        py::arg("s_min") = kSlackFloor);

  m.def("geometric_mean_tail", &geometric_mean_tail, py::arg("values"),
        py::arg("window") = 10);

  m.def(
      "run_grid",
      [](const std::vector<std::string>& problems,
         const std::vector<double>& mus, const std::vector<double>& noise,
         const std::vector<std::uint64_t>& seeds, int max_iter, int jobs,
         const std::string& out_dir) {
        ExperimentGrid grid;
        grid.problems = problems;
        grid.mus = mus;
        grid.noise_levels = noise;
        grid.seeds = seeds;
        grid.max_iter = max_iter;
        grid.out_dir = out_dir;
        std::vector<RunSummary> summaries;
        {
          py::gil_scoped_release release;
          summaries = run_grid(grid, jobs);
        }
        py::list out;
        for (const auto& s : summaries) {
          out.append(summary_dict(s));
        }
        return out;
      },
      py::arg("problems"), py::arg("mus") = std::vector<double>{1e-1, 1e-4},
      py::arg("noise") = std::vector<double>{1e-2, 1e-6},
      py::arg("seeds") = std::vector<std::uint64_t>{0},
      py::arg("max_iter") = 2000, py::arg("jobs") = 1,
      py::arg("out_dir") = "");

  m.def(
      "profile",
      [](const std::vector<double>& values,
         const std::vector<double>& thresholds) {
        // Summaries carrying only the measure of interest.
        std::vector<RunSummary> summaries(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
          summaries[i].geo_kkt_true = values[i];
        }
        return profile(summaries, ProfileMeasure::kKktTrue, thresholds);
      },
      py::arg("values"), py::arg("thresholds"),
      "Percentage of values at or below each threshold.");

  m.attr("TRACE_HEADER") = std::string{kTraceHeader};
}
