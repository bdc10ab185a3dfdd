#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <vector>

#include "des_queue.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"
#include "lamimo/queue.hpp"

using namespace lamimo;

namespace {

ServiceProfile profile_from_speeds(const std::vector<double>& f) {
  ServiceProfile p;
  for (double v : f) p.rates.push_back(1e7 * v);
  return p;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Golden-section search on |pi(m) - target| over log a; a different root
// finder from the production bisection.
double golden_section_calibration(const ServiceProfile& p, double target) {
  auto f = [&](double log_a) { return std::abs(steady_state(p, std::exp(log_a)).blocking() - target); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = -10.0, b = 10.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return std::exp((a + b) / 2.0);
}

// pi(n) from the product formula evaluated directly in long double.
std::vector<long double> direct_formula(const ServiceProfile& p, long double a) {
  const int m = p.servers();
  std::vector<long double> w(static_cast<std::size_t>(m) + 1, 1.0L);
  for (int n = 1; n <= m; ++n) {
    w[static_cast<std::size_t>(n)] = w[static_cast<std::size_t>(n - 1)] * a / n / p.speed_factor(n);
  }
  long double total = 0.0L;
  for (auto v : w) total += v;
  for (auto& v : w) v /= total;
  return w;
}

}  // namespace

TEST_SUITE("queue") {
  TEST_CASE("empty system at zero load") {
    const auto d = steady_state(profile_from_speeds({1.0, 0.9, 0.8}), 0.0);
    CHECK(d.pi == std::vector<double>{1.0, 0.0, 0.0, 0.0});
    CHECK(d.blocking() == 0.0);
    CHECK_THROWS_AS(steady_state(profile_from_speeds({1.0}), -1.0), Error);
  }

  TEST_CASE("one server is Erlang-B") {
    const auto p = profile_from_speeds({1.0});
    for (double a : {0.1, 1.0, 3.7}) {
      const auto d = steady_state(p, a);
      CHECK(d.pi[1] / d.pi[0] == doctest::Approx(a).epsilon(1e-14));
      CHECK(d.blocking() == doctest::Approx(a / (1.0 + a)).epsilon(1e-14));
    }
    CHECK(calibrate_peak_load(p, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("constant speed reduces to Erlang-B with m servers") {
    const int m = 8;
    const double a = 5.5;
    const auto d = steady_state(profile_from_speeds(std::vector<double>(m, 1.0)), a);
    double inv_b = 1.0;  // Erlang-B recursion: 1/B(k) = 1 + k/(a B(k-1))
    for (int k = 1; k <= m; ++k) inv_b = 1.0 + k / a * inv_b;
    CHECK(d.blocking() == doctest::Approx(1.0 / inv_b).epsilon(1e-13));
  }

  TEST_CASE("three-server example against the discrete-event oracle") {
    const auto p = profile_from_speeds({1.0, 0.8, 0.6});
    const auto d = steady_state(p, 2.0);
    const auto sim = oracle::simulate_loss_queue(p.rates, 2.0, 1'000'000, 100, 2024);
    for (std::size_t n = 0; n < d.pi.size(); ++n) {
      CHECK(std::abs(d.pi[n] - sim.pi[n]) <= 3.0 * sim.sigma[n]);
    }
    // PASTA: the blocked fraction of arrivals estimates pi(m).
    CHECK(sim.blocked_fraction == doctest::Approx(d.blocking()).epsilon(0.02));
  }

  TEST_CASE("occupancy does not depend on the work distribution") {
    // Processor-shared service is insensitive: deterministic work gives the
    // same stationary law.
    const auto p = profile_from_speeds({1.0, 0.85, 0.7, 0.6});
    const auto d = steady_state(p, 2.5);
    const auto sim = oracle::simulate_loss_queue(p.rates, 2.5, 1'000'000, 100, 99,
                                                 oracle::WorkDistribution::deterministic);
    for (std::size_t n = 0; n < d.pi.size(); ++n) {
      CHECK(std::abs(d.pi[n] - sim.pi[n]) <= 3.0 * sim.sigma[n]);
    }
  }

  TEST_CASE("normalisation and monotonicity in the offered load") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
      const auto p = fixtures::random_profile(1 + static_cast<int>(rng() % 93), rng);
      double prev_block = 0.0, prev_mean = 0.0;
      for (double a = 0.25; a < 200.0; a *= 1.5) {
        const auto d = steady_state(p, a);
        CHECK(std::abs(sum(d.pi) - 1.0) < 1e-12);
        for (double v : d.pi) CHECK(v >= 0.0);
        CHECK(d.blocking() > prev_block);
        CHECK(d.mean_occupancy() > prev_mean);
        prev_block = d.blocking();
        prev_mean = d.mean_occupancy();
      }
    }
  }

  TEST_CASE("log-domain and direct product agree at m = 93") {
    std::mt19937_64 rng(17);
    const auto p = fixtures::random_profile(93, rng);
    const double a = calibrate_peak_load(p, 0.02);
    for (double scale : {0.9, 1.0, 1.1}) {
      const auto d = steady_state(p, a * scale);
      const auto ref = direct_formula(p, static_cast<long double>(a * scale));
      for (std::size_t n = 0; n < d.pi.size(); ++n) {
        if (ref[n] > 1e-280L) CHECK(std::abs(d.pi[n] - static_cast<double>(ref[n])) <= 1e-9 * static_cast<double>(ref[n]));
      }
    }
  }

  TEST_CASE("calibration hits the blocking target") {
    std::mt19937_64 rng(23);
    const auto p = fixtures::random_profile(93, rng);
    const double a = calibrate_peak_load(p, 0.02);
    CHECK(std::abs(steady_state(p, a).blocking() - 0.02) < 1e-9);
    CHECK(std::abs(a - golden_section_calibration(p, 0.02)) <= 1e-6 * a);
    CHECK(calibrate_peak_load(p, 1e-6) < calibrate_peak_load(p, 1e-3));
    CHECK_THROWS_AS(calibrate_peak_load(p, 0.0), Error);
    CHECK_THROWS_AS(calibrate_peak_load(p, 1.0), Error);
  }

  TEST_CASE("hourly offered loads scale with the load fraction") {
    LoadProfile dlp;
    dlp.hourly_fraction = {0.5, 1.0, 0.25};
    const auto loads = hourly_offered_loads(dlp, 40.0);
    CHECK(loads == std::vector<double>{20.0, 40.0, 10.0});

    std::mt19937_64 rng(1);
    const auto p = fixtures::random_profile(93, rng);
    const double a = calibrate_peak_load(p, 0.02);
    CHECK(steady_state(p, a / 2.0).blocking() < 0.02);

    LoadProfile flat;
    flat.hourly_fraction.assign(24, 1.0);
    for (double v : hourly_offered_loads(flat, a)) CHECK(steady_state(p, v).pi == steady_state(p, a).pi);
  }

  TEST_CASE("load profile validation and file parsing") {
    LoadProfile bad;
    bad.hourly_fraction = {0.5, 0.9};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.hourly_fraction = {0.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), Error);

    const auto earth = LoadProfile::read(fixtures::source_dir() / "data" / "earth_dlp.csv");
    CHECK(earth.hours() == 24);
    const auto sine = LoadProfile::read(fixtures::source_dir() / "data" / "sinusoid_dlp.csv");
    CHECK(sine.hours() == 24);
    CHECK(earth.first_hours(3).hourly_fraction.size() == 3);
    CHECK_THROWS_AS(earth.first_hours(25), Error);

    const auto dir = fixtures::scratch_dir("dlp");
    {
      std::ofstream f(dir / "gap.csv");
      f << "1,0.5\n3,1.0\n";
    }
    CHECK_THROWS_AS(LoadProfile::read(dir / "gap.csv"), Error);
    {
      std::ofstream f(dir / "noheader.csv");
      f << "# comment\n0,0.5\n1,1.0\n";
    }
    CHECK(LoadProfile::read(dir / "noheader.csv").hours() == 2);
    CHECK_THROWS_AS(LoadProfile::read(dir / "missing.csv"), Error);
  }

  TEST_CASE("offered load from arrivals") {
    ServiceProfile p = profile_from_speeds({1.0, 0.5});
    p.traffic_per_user_bits = 2e6;
    CHECK(offered_load_from_arrivals(p, 3.0) == doctest::Approx(3.0 * 2e6 / 1e7));
  }

  TEST_CASE("occupancy CSV") {
    const auto dir = fixtures::scratch_dir("occ");
    const auto d = steady_state(profile_from_speeds({1.0, 0.7}), 1.3);
    write_occupancy_csv(d, dir / "occ.csv");
    const auto t = read_csv(dir / "occ.csv");
    CHECK(t.header == std::vector<std::string>{"n", "pi"});
    REQUIRE(t.rows.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) CHECK(parse_double(t.rows[n][1], "occ") == d.pi[n]);
  }
}
