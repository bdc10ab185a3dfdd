#pragma once

#include <filesystem>

#include "lamimo/geometry.hpp"
#include "lamimo/optimizer.hpp"
#include "lamimo/radio.hpp"

namespace lamimo {

/// Everything a run needs. Field defaults are the reference scenario except
/// dlp_path, which has no default.
struct ScenarioConfig {
  GeometryConfig geometry;
  RateParams rate;  // k_max and tx power are replaced by the dimensioning result
  PAParams pa;
  BasebandCoeffs baseband;

  std::filesystem::path dlp_path;
  int hours = 24;
  double blocking_target = 0.02;
  double traffic_per_user_bits = 1e6;  // informational; the queue only sees a = lambda s / R(1)
  bool recalibrate_to_fixed_point = false;
  int max_recalibrations = 50;

  DimensioningGrid dimensioning;
  int max_sweeps = 100;

  std::filesystem::path output_dir = "out";

  void validate() const;
};

/// Parses an INI file (`[section]`, `key = value`). Unknown sections or keys
/// are errors; relative paths resolve against the config file's directory.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace lamimo
