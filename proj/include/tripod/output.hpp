#pragma once

#include "tripod/propagator.hpp"

#include <filesystem>
#include <string>

namespace tripod {

// boundary.csv: tau_invGamma,re_omega1,im_omega1,abs_omega1 (one row per step).
std::string boundary_csv(const SimulationRecord& record);

// snapshots.ndjson: one JSON object per snapshot frame.
std::string snapshots_ndjson(const SimulationRecord& record);

// metrics.json: metrics, diagnostics, warnings and the scenario echo.
std::string metrics_json(const SimulationRecord& record);

// Writes the three files above into `dir`, creating it if needed.
void write_outputs(const SimulationRecord& record, const std::filesystem::path& dir);

// Writes `content` to `path` or throws tripod::Error.
void write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace tripod
