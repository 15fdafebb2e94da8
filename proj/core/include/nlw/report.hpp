#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlw/harness.hpp"
#include "nlw/rademacher.hpp"
#include "nlw/stress_energy.hpp"
#include "nlw/worldline.hpp"

namespace nlw {

/// Shortest round-trip decimal form; identical input gives identical text.
std::string format_number(double v);

std::string ray_flux_csv(const std::vector<RayFluxRow>& rows);
std::string parallelogram_csv(const std::vector<ParallelogramRow>& rows);
std::string conservation_csv(const std::vector<ConservationResiduals>& rows);
std::string worldline_csv(const ConcentrationTrace& trace, const WorldlineExtraction& extraction);
std::string decay_csv(const DecayCurve& curve);
std::string energy_csv(const Trajectory& traj);

std::string extraction_json(const WorldlineExtraction& extraction);
std::string rademacher_json(const RademacherReport& report);
std::string scaling_json(const std::vector<ScalingFit>& fits);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

/// {version, config_hash, stages: [...], files: [{name, sha256, bytes}]},
/// file names relative to `root`.
std::string manifest_json(const RunReport& report, const std::filesystem::path& root);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlw
