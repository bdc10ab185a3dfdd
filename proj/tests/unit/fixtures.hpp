#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lamimo/geometry.hpp"
#include "lamimo/queue.hpp"
#include "lamimo/radio.hpp"

namespace fixtures {

inline std::filesystem::path source_dir() { return LAMIMO_SOURCE_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("lamimo_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Reference coupling, computed once per test binary.
inline const lamimo::CouplingMatrix& reference_coupling() {
  static const lamimo::CouplingMatrix c = [] {
    lamimo::GeometryConfig g;
    return lamimo::compute_coupling(lamimo::build_layout(g), g);
  }();
  return c;
}

/// Coupling with the reference serving term and random cross terms.
inline lamimo::CouplingMatrix random_coupling(int cells, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cross(0.005, 0.2);
  std::uniform_real_distribution<double> serving(0.5e13, 2e13);
  lamimo::CouplingMatrix c;
  c.lambda_serving.resize(static_cast<std::size_t>(cells));
  c.lambda_cross.assign(static_cast<std::size_t>(cells), std::vector<double>(static_cast<std::size_t>(cells), 0.0));
  for (int i = 0; i < cells; ++i) {
    c.lambda_serving[static_cast<std::size_t>(i)] = serving(rng);
    for (int j = 0; j < cells; ++j) {
      if (i != j) c.lambda_cross[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cross(rng);
    }
  }
  return c;
}

/// Decreasing per-user rates for m servers.
inline lamimo::ServiceProfile random_profile(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> step(0.7, 1.0);
  lamimo::ServiceProfile p;
  double r = 5e7;
  for (int n = 1; n <= m; ++n) {
    p.rates.push_back(r);
    r *= step(rng);
  }
  return p;
}

}  // namespace fixtures
