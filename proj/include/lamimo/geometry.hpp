#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "lamimo/simd/kernels.hpp"

namespace lamimo {

/// Layout and propagation parameters. Defaults are the reference scenario.
struct GeometryConfig {
  double cell_radius_m = 500.0;   // hexagon circumradius, d_max
  double min_distance_m = 35.0;   // users closer than this to the BS are excluded
  int num_cells = 19;             // 19 (wrap-around cluster) or 1 (isolated cell)
  int grid_points_per_cell = 15000;
  double pathloss_coeff = std::pow(10.0, -3.53);
  double pathloss_exponent = 3.76;

  /// Throws Error(config) naming the offending field.
  void validate() const;

  /// Distance between neighbouring base stations, sqrt(3) * radius.
  double inter_site_distance() const { return std::sqrt(3.0) * cell_radius_m; }
};

/// Structure-of-arrays point list so the distance kernels can stream it.
struct PointSet {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  Vec2 operator[](std::size_t i) const { return {x[i], y[i]}; }
};

struct NetworkLayout {
  std::vector<Vec2> cell_centers;
  std::vector<PointSet> test_points;  // absolute coordinates, one set per cell
  std::vector<Vec2> wrap_offsets;     // lattice translations of the whole cluster

  int num_cells() const { return static_cast<int>(cell_centers.size()); }

  /// Centre of `cell` replicated over the identity and every wrap offset.
  std::vector<Vec2> images_of(int cell) const;
};

/// Large-scale coupling between cells.
/// lambda_serving[c] = E_u{1 / g_c(u)} over cell c's users;
/// lambda_cross[c][d] = E_u{g_d(u) / g_c(u)} (diagonal stored as 0).
struct CouplingMatrix {
  std::vector<double> lambda_serving;
  std::vector<std::vector<double>> lambda_cross;

  int num_cells() const { return static_cast<int>(lambda_serving.size()); }

  /// Sum over d != c of lambda_cross[c][d].
  double cross_sum(int cell) const;

  void validate() const;
};

NetworkLayout build_layout(const GeometryConfig& cfg);

/// Linear path gain coeff / d^exponent. Throws for d <= 0.
double path_loss(double distance_m, const GeometryConfig& cfg);

/// Distance from `point` to the nearest image of `cell`'s base station.
double wrapped_distance(const NetworkLayout& layout, int cell, Vec2 point);

CouplingMatrix compute_coupling(const NetworkLayout& layout, const GeometryConfig& cfg);

/// Writes `c,d,lambda` rows; d == c rows carry lambda_serving.
void write_coupling_csv(const CouplingMatrix& coupling, const std::filesystem::path& path);

}  // namespace lamimo
