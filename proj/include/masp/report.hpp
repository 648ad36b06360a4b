#pragma once

#include <string>

#include "masp/experiment.hpp"

namespace masp {

// shortest exact decimal for round-tripping (%.17g, C locale)
std::string format_double(double v);

// One line per replication, fixed column order, no wall-clock column, so
// repeated runs with the same seed produce byte-identical files.
std::string rows_to_csv(const Report& report);
void write_rows_csv(const Report& report, const std::string& path);

// Config echo plus the summary block (the one place wall time appears).
std::string summary_to_json(const Report& report);
void write_summary_json(const Report& report, const std::string& path);

// Single-fit output: resolved tuning, diagnostics, estimate coordinates.
std::string fit_to_json(const ExperimentConfig& cfg, const ResolvedTuning& t,
                        const AggregateResult& result);

}  // namespace masp
