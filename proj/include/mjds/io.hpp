// Serialization: fixed-precision CSV emitters, curve read-back, and the
// JSON report builders shared by the CLI and tests.
#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mjds/jump.hpp"
#include "mjds/moments.hpp"
#include "mjds/sat.hpp"

namespace mjds {

// Reports keep their key order, so dumps diff cleanly.
using Json = nlohmann::ordered_json;

// 17 significant digits: enough to round-trip any double, stable for diffs.
std::string fmt17(double v);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string ensemble_csv(const EnsembleStats& stats);
std::string trajectory_csv(const Trajectory& traj);
std::string region_csv(const RegionGrid& grid);
std::string frontier_csv(const std::vector<FrontierPoint>& points);

// Parses an ensemble CSV back into a curve (columns k, mean_sq and, when
// present, ci99_halfwidth).
MomentCurve read_ensemble_csv(const std::filesystem::path& path);

Json certificate_json(const CertificateReport& report);
Json condition_json(const ConditionReport& report);
Json fit_json(const DecayFit& fit);

// 2-space indent plus trailing newline.
std::string dump_json(const Json& j);

// Log-scale plot script for an ensemble CSV next to it.
std::string gnuplot_ensemble_script(const std::string& csv_name);

}  // namespace mjds
