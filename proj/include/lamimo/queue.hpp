#pragma once

#include <filesystem>
#include <vector>

namespace lamimo {

/// Occupancy-dependent service of an M/G/m/m cell: with n users each is
/// served at rates[n-1] bit/s; m = rates.size() users at most.
struct ServiceProfile {
  std::vector<double> rates;
  double traffic_per_user_bits = 1.0;  // s; only a = lambda * s / R(1) matters

  int servers() const { return static_cast<int>(rates.size()); }

  /// Relative speed f(n) = R(n) / R(1), n in 1..m.
  double speed_factor(int n) const { return rates[static_cast<std::size_t>(n - 1)] / rates[0]; }

  void validate() const;
};

/// Steady-state occupancy pi(0..m) for one offered load.
struct StateDistribution {
  std::vector<double> pi;
  double offered_load = 0.0;

  int servers() const { return static_cast<int>(pi.size()) - 1; }

  /// Probability that an arrival is rejected (PASTA): pi(m).
  double blocking() const { return pi.back(); }

  double mean_occupancy() const;
};

/// Fraction of peak load per hour; the busiest hour is exactly 1.
struct LoadProfile {
  std::vector<double> hourly_fraction;

  int hours() const { return static_cast<int>(hourly_fraction.size()); }

  void validate() const;

  /// Reads `hour,fraction` rows (optional header, '#' comments). Hours must be
  /// consecutive integers.
  static LoadProfile read(const std::filesystem::path& path);

  /// First `hours` entries (a partial day need not contain the peak).
  LoadProfile first_hours(int hours) const;
};

/// a = lambda * s / R(1).
double offered_load_from_arrivals(const ServiceProfile& profile, double lambda_arrival);

/// pi(n) proportional to a^n / (n! f(1)...f(n)), computed in the log domain.
StateDistribution steady_state(const ServiceProfile& profile, double offered_load);

/// Offered load a_max at which pi(m) equals `target_blocking` (bisection in
/// log a; blocking is strictly increasing in a).
double calibrate_peak_load(const ServiceProfile& profile, double target_blocking);

/// a_h = hourly_fraction[h] * a_max.
std::vector<double> hourly_offered_loads(const LoadProfile& dlp, double a_max);

void write_occupancy_csv(const StateDistribution& dist, const std::filesystem::path& path);

}  // namespace lamimo
