#include "lamimo/queue.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"

namespace lamimo {

void ServiceProfile::validate() const {
  if (rates.empty()) throw_config("service profile", "needs at least one server");
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) throw_config("service profile", "rates must be positive");
  }
  if (!(traffic_per_user_bits > 0.0)) throw_config("traffic_per_user_bits", "must be positive");
}

double StateDistribution::mean_occupancy() const {
  double s = 0.0;
  for (std::size_t n = 1; n < pi.size(); ++n) s += static_cast<double>(n) * pi[n];
  return s;
}

void LoadProfile::validate() const {
  if (hourly_fraction.empty()) throw_config("load profile", "no hours");
  double peak = 0.0;
  for (double f : hourly_fraction) {
    if (!(f > 0.0 && f <= 1.0)) throw_config("load profile", "fractions must lie in (0, 1]");
    peak = std::max(peak, f);
  }
  if (std::abs(peak - 1.0) > 1e-12) throw_config("load profile", "peak hour must equal 1");
}

LoadProfile LoadProfile::read(const std::filesystem::path& path) {
  const auto table = read_csv(path, false);
  LoadProfile dlp;
  long long expected_hour = -1;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != 2) throw Error(ErrorKind::config, path.string() + ": expected hour,fraction rows");
    // Tolerate a header line.
    if (i == 0 && !row[0].empty() && !std::isdigit(static_cast<unsigned char>(row[0][0]))) continue;
    const auto hour = parse_int(row[0], path.string());
    if (expected_hour >= 0 && hour != expected_hour) {
      throw Error(ErrorKind::config, path.string() + ": hours must be consecutive");
    }
    expected_hour = hour + 1;
    dlp.hourly_fraction.push_back(parse_double(row[1], path.string()));
  }
  try {
    dlp.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, path.string() + ": " + e.what());
  }
  return dlp;
}

LoadProfile LoadProfile::first_hours(int hours) const {
  if (hours < 1 || hours > this->hours()) throw_config("hours", "must be in 1.." + std::to_string(this->hours()));
  LoadProfile out;
  out.hourly_fraction.assign(hourly_fraction.begin(), hourly_fraction.begin() + hours);
  return out;
}

double offered_load_from_arrivals(const ServiceProfile& profile, double lambda_arrival) {
  profile.validate();
  if (!(lambda_arrival >= 0.0)) throw_model("arrival rate must be non-negative");
  return lambda_arrival * profile.traffic_per_user_bits / profile.rates[0];
}

StateDistribution steady_state(const ServiceProfile& profile, double offered_load) {
  profile.validate();
  if (!(offered_load >= 0.0) || !std::isfinite(offered_load)) {
    throw_model("steady_state: offered load must be finite and non-negative");
  }
  const int m = profile.servers();
  StateDistribution dist;
  dist.offered_load = offered_load;
  dist.pi.assign(static_cast<std::size_t>(m) + 1, 0.0);
  if (offered_load == 0.0) {
    dist.pi[0] = 1.0;
    return dist;
  }

  // log w(n) = n log a - log n! - sum_{i<=n} log f(i); w(0) = 1.
  std::vector<double> logw(static_cast<std::size_t>(m) + 1, 0.0);
  const double log_a = std::log(offered_load);
  for (int n = 1; n <= m; ++n) {
    logw[static_cast<std::size_t>(n)] = logw[static_cast<std::size_t>(n - 1)] + log_a -
                                        std::log(static_cast<double>(n)) -
                                        std::log(profile.speed_factor(n));
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (std::size_t n = 0; n < logw.size(); ++n) {
    dist.pi[n] = std::exp(logw[n] - top);
    total += dist.pi[n];
  }
  for (double& p : dist.pi) p /= total;
  return dist;
}

double calibrate_peak_load(const ServiceProfile& profile, double target_blocking) {
  profile.validate();
  if (!(target_blocking > 0.0 && target_blocking < 1.0)) {
    throw_config("blocking_target", "must lie in (0, 1)");
  }
  auto excess = [&](double log_a) {
    return steady_state(profile, std::exp(log_a)).blocking() - target_blocking;
  };

  double lo = 0.0;
  double hi = 0.0;
  while (excess(lo) >= 0.0) {
    lo -= 1.0;
    if (lo < -600.0) throw_model("calibrate_peak_load: no lower bracket for the blocking target");
  }
  while (excess(hi) <= 0.0) {
    hi += 1.0;
    if (hi > 600.0) throw_model("calibrate_peak_load: no upper bracket for the blocking target");
  }

  const auto [a, b] = boost::math::tools::bisect(
      excess, lo, hi, boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 1));
  const double xa = std::abs(excess(a)) <= std::abs(excess(b)) ? a : b;
  const double err = std::abs(excess(xa));
  if (!(err < 1e-9)) {
    throw_model("calibrate_peak_load: residual " + std::to_string(err) + " above 1e-9");
  }
  return std::exp(xa);
}

std::vector<double> hourly_offered_loads(const LoadProfile& dlp, double a_max) {
  dlp.validate();
  if (!(a_max >= 0.0)) throw_model("hourly_offered_loads: a_max must be non-negative");
  std::vector<double> out;
  out.reserve(dlp.hourly_fraction.size());
  for (double f : dlp.hourly_fraction) out.push_back(f * a_max);
  return out;
}

void write_occupancy_csv(const StateDistribution& dist, const std::filesystem::path& path) {
  CsvWriter csv(path, {"n", "pi"});
  for (std::size_t n = 0; n < dist.pi.size(); ++n) {
    csv.row({static_cast<long long>(n), dist.pi[n]});
  }
  csv.close();
}

}  // namespace lamimo
