// Copyright (c) noisyip contributors

#include "noisyip/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace noisyip {

namespace {

// JSON has no NaN; missing true measures become null.
nlohmann::json number_or_null(double value) {
  if (std::isfinite(value)) {
    return value;
  }
  return nullptr;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<IterationRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.tau) << ','
        << format_double(r.alpha_max) << ',' << format_double(r.alpha) << ','
        << r.j << ',' << format_double(r.dm) << ','
        << format_double(r.merit_noisy) << ','
        << format_double(r.stat_kkt_noisy) << ','
        << format_double(r.stat_infeas_noisy) << ','
        << format_double(r.stat_kkt_true) << ','
        << format_double(r.stat_infeas_true) << ','
        << format_double(r.shift) << ',' << format_double(r.mu) << '\n';
  }
}

std::string trace_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

void save_trace_csv(const std::string& path,
                    const std::vector<IterationRecord>& trace) {
  std::ofstream out{path};
  if (!out) {
    throw std::runtime_error("cannot open " + path);
  }
  write_trace_csv(out, trace);
}

std::vector<IterationRecord> merged_trace(
    const std::vector<SolveResult>& results) {
  std::vector<IterationRecord> all;
  for (const auto& res : results) {
    all.insert(all.end(), res.trace.begin(), res.trace.end());
  }
  return all;
}

std::string summary_json(const SolveResult& result,
                         const std::string& problem) {
  nlohmann::json j;
  j["problem"] = problem;
  j["status"] = status_name(result.status);
  j["message"] = result.message;
  j["iterations"] = result.iterations();
  j["wall_time"] = result.wall_time;
  j["mu"] = result.final_state.mu;
  j["tau"] = result.final_state.tau;
  j["violations"] = result.violation_count();
  std::uint32_t mask = 0;
  for (const auto& rec : result.trace) {
    mask |= rec.violations;
  }
  j["violation_kinds"] = describe_violations(mask);
  j["x"] = std::vector<double>(result.final_state.x.data(),
                               result.final_state.x.data() +
                                   result.final_state.x.size());
  if (!result.trace.empty()) {
    const auto& last = result.trace.back();
    j["final"] = {
        {"k", last.k},
        {"dm", number_or_null(last.dm)},
        {"merit_noisy", number_or_null(last.merit_noisy)},
        {"stat_kkt_noisy", number_or_null(last.stat_kkt_noisy)},
        {"stat_infeas_noisy", number_or_null(last.stat_infeas_noisy)},
        {"stat_kkt_true", number_or_null(last.stat_kkt_true)},
        {"stat_infeas_true", number_or_null(last.stat_infeas_true)},
    };
  }
  return j.dump(2);
}

}  // namespace noisyip
