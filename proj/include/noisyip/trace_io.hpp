// Copyright (c) noisyip contributors

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "noisyip/solver.hpp"

namespace noisyip {

/// Column order of trace CSV files.
inline constexpr const char* kTraceHeader =
    "k,tau,alpha_max,alpha,j,dm,merit_noisy,stat_kkt_noisy,"
    "stat_infeas_noisy,stat_kkt_true,stat_infeas_true,shift,mu";

/// Writes the header and one row per record; doubles use %.17g.
void write_trace_csv(std::ostream& out,
                     const std::vector<IterationRecord>& trace);
std::string trace_csv(const std::vector<IterationRecord>& trace);
void save_trace_csv(const std::string& path,
                    const std::vector<IterationRecord>& trace);

/// Concatenated trace of a continuation run.
std::vector<IterationRecord> merged_trace(
    const std::vector<SolveResult>& results);

/**
 * {"problem", "status", "iterations", "wall_time", "mu", "tau",
 *  "final": {measures of the last record}, "x": [...], "violations": n}
 */
std::string summary_json(const SolveResult& result,
                         const std::string& problem);

/// %.17g formatting, "nan"/"inf"/"-inf" for nonfinite values.
std::string format_double(double value);

}  // namespace noisyip
