#include "lamimo/geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"

namespace lamimo {

namespace {

constexpr double kSin60 = 0.86602540378443864676;
constexpr double kTan30 = 0.57735026918962576451;

// Rotations by k * 60 degrees. Entries k and k+3 are exact negatives so the
// generated point cloud is exactly symmetric under inversion.
constexpr std::array<double, 6> kCos = {1.0, 0.5, -0.5, -1.0, -0.5, 0.5};
constexpr std::array<double, 6> kSin = {0.0, kSin60, kSin60, 0.0, -kSin60, -kSin60};

struct Axial {
  int q;
  int r;
};

Vec2 lattice_point(Axial a, double isd) {
  // a1 = isd * (1, 0), a2 = isd * (1/2, sqrt(3)/2)
  return {isd * (a.q + 0.5 * a.r), isd * kSin60 * a.r};
}

int hex_ring(Axial a) { return std::max({std::abs(a.q), std::abs(a.r), std::abs(a.q + a.r)}); }

// Second additive recurrence (R2) low-discrepancy sequence in the unit square.
class R2Sequence {
 public:
  Vec2 next() {
    ++index_;
    const double i = static_cast<double>(index_);
    return {frac(0.5 + kAlpha1 * i), frac(0.5 + kAlpha2 * i)};
  }

 private:
  static double frac(double v) { return v - std::floor(v); }
  static constexpr double kAlpha1 = 0.75487766624669276005;  // 1/g, g the plastic number
  static constexpr double kAlpha2 = 0.56984029099805326591;  // 1/g^2
  long long index_ = 0;
};

// Points uniform by area over the 60-degree sector |angle| < 30 deg of the
// hexagon (x <= apothem) with the disc r < r_min removed. The +30 deg ray is
// excluded so rotated copies never coincide.
std::vector<Vec2> sector_points(std::size_t count, double apothem, double half_width,
                                double r_min) {
  std::vector<Vec2> pts;
  pts.reserve(count);
  R2Sequence seq;
  const double r_min2 = r_min * r_min;
  while (pts.size() < count) {
    const Vec2 u = seq.next();
    const double x = u.x * apothem;
    const double y = (2.0 * u.y - 1.0) * half_width;
    if (y < -x * kTan30 || y >= x * kTan30) continue;
    if (x * x + y * y < r_min2) continue;
    pts.push_back({x, y});
  }
  return pts;
}

// Neumaier-compensated running sum; fixed order keeps results reproducible.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

void GeometryConfig::validate() const {
  if (!(cell_radius_m > 0.0)) throw_config("cell_radius_m", "must be positive");
  if (!(min_distance_m > 0.0)) throw_config("min_distance_m", "must be positive");
  if (!(min_distance_m < cell_radius_m)) {
    throw_config("min_distance_m", "must be smaller than cell_radius_m (empty user region)");
  }
  // The user region is the hexagon; the exclusion disc must fit inside it.
  if (!(min_distance_m < inter_site_distance() / 2.0)) {
    throw_config("min_distance_m", "exclusion disc reaches the hexagon edge");
  }
  if (num_cells != 19 && num_cells != 1) {
    throw_config("num_cells", "wrap-around is defined for the 19-cell cluster (or 1 isolated cell)");
  }
  if (grid_points_per_cell < 1) throw_config("grid_points_per_cell", "must be at least 1");
  if (!(pathloss_coeff > 0.0)) throw_config("pathloss_coeff", "must be positive");
  if (!(pathloss_exponent > 2.0)) throw_config("pathloss_exponent", "must exceed 2");
}

std::vector<Vec2> NetworkLayout::images_of(int cell) const {
  if (cell < 0 || cell >= num_cells()) throw_model("cell index out of range");
  const Vec2 c = cell_centers[static_cast<std::size_t>(cell)];
  std::vector<Vec2> images;
  images.reserve(wrap_offsets.size() + 1);
  images.push_back(c);
  for (const auto& off : wrap_offsets) images.push_back({c.x + off.x, c.y + off.y});
  return images;
}

double CouplingMatrix::cross_sum(int cell) const {
  const auto& row = lambda_cross.at(static_cast<std::size_t>(cell));
  double s = 0.0;
  for (int d = 0; d < num_cells(); ++d) {
    if (d != cell) s += row[static_cast<std::size_t>(d)];
  }
  return s;
}

void CouplingMatrix::validate() const {
  const auto n = lambda_serving.size();
  if (n == 0) throw_config("coupling", "no cells");
  if (lambda_cross.size() != n) throw_config("coupling", "lambda_cross row count mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    if (!(lambda_serving[c] > 0.0)) throw_config("coupling", "lambda_serving must be positive");
    if (lambda_cross[c].size() != n) throw_config("coupling", "lambda_cross must be square");
    for (std::size_t d = 0; d < n; ++d) {
      if (d != c && !(lambda_cross[c][d] >= 0.0)) {
        throw_config("coupling", "lambda_cross must be non-negative");
      }
    }
  }
}

NetworkLayout build_layout(const GeometryConfig& cfg) {
  cfg.validate();
  const double isd = cfg.inter_site_distance();
  NetworkLayout layout;

  if (cfg.num_cells == 1) {
    layout.cell_centers.push_back({0.0, 0.0});
  } else {
    std::vector<Axial> cells;
    for (int q = -2; q <= 2; ++q) {
      for (int r = -2; r <= 2; ++r) {
        if (hex_ring({q, r}) <= 2) cells.push_back({q, r});
      }
    }
    // Centre cell first, then each ring counter-clockwise from the +x axis.
    std::stable_sort(cells.begin(), cells.end(), [isd](Axial a, Axial b) {
      if (hex_ring(a) != hex_ring(b)) return hex_ring(a) < hex_ring(b);
      const Vec2 pa = lattice_point(a, isd);
      const Vec2 pb = lattice_point(b, isd);
      auto angle = [](Vec2 p) {
        const double t = std::atan2(p.y, p.x);
        return t < -1e-12 ? t + 2.0 * M_PI : t;
      };
      return angle(pa) < angle(pb);
    });
    for (auto a : cells) layout.cell_centers.push_back(lattice_point(a, isd));

    // The 19-cell cluster tiles the plane with shift (3, 2) in lattice
    // coordinates and its 60-degree rotations; axial rotation is (q, r) -> (-r, q + r).
    Axial shift{3, 2};
    for (int k = 0; k < 6; ++k) {
      layout.wrap_offsets.push_back(lattice_point(shift, isd));
      shift = {-shift.r, shift.q + shift.r};
    }
  }

  const auto total = static_cast<std::size_t>(cfg.grid_points_per_cell);
  const std::size_t per_sector = (total + 5) / 6;
  const auto sector =
      sector_points(per_sector, isd / 2.0, cfg.cell_radius_m / 2.0, cfg.min_distance_m);

  std::vector<Vec2> local;
  local.reserve(per_sector * 6);
  for (const auto& p : sector) {
    for (std::size_t k = 0; k < 6 && local.size() < total; ++k) {
      local.push_back({p.x * kCos[k] - p.y * kSin[k], p.x * kSin[k] + p.y * kCos[k]});
    }
  }

  for (const auto& c : layout.cell_centers) {
    PointSet set;
    set.x.reserve(local.size());
    set.y.reserve(local.size());
    for (const auto& p : local) {
      set.x.push_back(c.x + p.x);
      set.y.push_back(c.y + p.y);
    }
    layout.test_points.push_back(std::move(set));
  }
  return layout;
}

double path_loss(double distance_m, const GeometryConfig& cfg) {
  if (!(distance_m > 0.0)) throw_model("path_loss: distance must be positive");
  return cfg.pathloss_coeff / std::pow(distance_m, cfg.pathloss_exponent);
}

double wrapped_distance(const NetworkLayout& layout, int cell, Vec2 point) {
  const auto images = layout.images_of(cell);
  double best2 = 0.0;
  simd::scalar::min_sq_distance(std::span<const double>(&point.x, 1),
                                std::span<const double>(&point.y, 1), images,
                                std::span<double>(&best2, 1));
  return std::sqrt(best2);
}

CouplingMatrix compute_coupling(const NetworkLayout& layout, const GeometryConfig& cfg) {
  cfg.validate();
  const int n_cells = layout.num_cells();
  if (n_cells == 0 || layout.test_points.size() != static_cast<std::size_t>(n_cells)) {
    throw_model("compute_coupling: layout has no cells or mismatched test point sets");
  }
  const double half_exp = cfg.pathloss_exponent / 2.0;

  CouplingMatrix out;
  out.lambda_serving.assign(static_cast<std::size_t>(n_cells), 0.0);
  out.lambda_cross.assign(static_cast<std::size_t>(n_cells),
                          std::vector<double>(static_cast<std::size_t>(n_cells), 0.0));

  std::vector<double> serving2;
  std::vector<double> other2;
  for (int c = 0; c < n_cells; ++c) {
    const auto& pts = layout.test_points[static_cast<std::size_t>(c)];
    if (pts.size() == 0) throw_model("compute_coupling: cell without test points");
    const std::span<const double> xs(pts.x), ys(pts.y);
    serving2.resize(pts.size());
    other2.resize(pts.size());

    const Vec2 own = layout.cell_centers[static_cast<std::size_t>(c)];
    simd::min_sq_distance(xs, ys, std::span<const Vec2>(&own, 1), serving2);

    // 1/g(d) = d^exp / coeff
    CompensatedSum inv_gain;
    for (double d2 : serving2) {
      if (!(d2 > 0.0)) throw_model("compute_coupling: test point at the base station");
      inv_gain.add(std::pow(d2, half_exp));
    }
    const double count = static_cast<double>(pts.size());
    out.lambda_serving[static_cast<std::size_t>(c)] = inv_gain.value() / cfg.pathloss_coeff / count;

    for (int d = 0; d < n_cells; ++d) {
      if (d == c) continue;
      const auto images = layout.images_of(d);
      simd::min_sq_distance(xs, ys, images, other2);
      // g_d / g_c = (d_c / d_d)^exp
      CompensatedSum ratio;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        ratio.add(std::pow(serving2[i] / other2[i], half_exp));
      }
      out.lambda_cross[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] =
          ratio.value() / count;
    }
  }
  return out;
}

void write_coupling_csv(const CouplingMatrix& coupling, const std::filesystem::path& path) {
  CsvWriter csv(path, {"c", "d", "lambda"});
  for (int c = 0; c < coupling.num_cells(); ++c) {
    for (int d = 0; d < coupling.num_cells(); ++d) {
      const double v = (c == d) ? coupling.lambda_serving[static_cast<std::size_t>(c)]
                                : coupling.lambda_cross[static_cast<std::size_t>(c)]
                                                       [static_cast<std::size_t>(d)];
      csv.row({static_cast<long long>(c), static_cast<long long>(d), v});
    }
  }
  csv.close();
}

}  // namespace lamimo
