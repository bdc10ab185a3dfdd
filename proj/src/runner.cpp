#include "lamimo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <string>

#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"

namespace lamimo {

namespace {

constexpr double kSecondsPerHour = 3600.0;

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.in_stage(stage);
  }
}

std::vector<double> constant_vector(int cells, double value) {
  return std::vector<double>(static_cast<std::size_t>(cells), value);
}

// Cell-averaged per-user rate in every state for the given per-cell policies.
ServiceProfile profile_from_policies(const CouplingMatrix& coupling, const EnergyModel& energy,
                                     const std::vector<AntennaPolicy>& policies,
                                     const std::vector<double>& expected,
                                     double traffic_per_user_bits) {
  const int cells = coupling.num_cells();
  const int m = policies.front().states();
  ServiceProfile profile;
  profile.traffic_per_user_bits = traffic_per_user_bits;
  profile.rates.resize(static_cast<std::size_t>(m));
  for (int n = 1; n <= m; ++n) {
    double sum = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double g = single_antenna_sinr(coupling, c, n, energy.rate_params(), expected);
      sum += energy.user_rate(n, policies[static_cast<std::size_t>(c)].at(n), g);
    }
    profile.rates[static_cast<std::size_t>(n - 1)] = sum / cells;
  }
  return profile;
}

std::vector<StateRecord> state_records(const StateDistribution& dist,
                                       const std::vector<AntennaPolicy>& policies,
                                       const std::vector<double>& expected,
                                       const CouplingMatrix& coupling, const EnergyModel& energy) {
  const int cells = coupling.num_cells();
  const int m = dist.servers();
  std::vector<StateRecord> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  out.push_back({0, dist.pi[0], 0, 0.0, energy.idle_power(), 0.0});
  for (int n = 1; n <= m; ++n) {
    StateRecord r;
    r.n = n;
    r.pi = dist.pi[static_cast<std::size_t>(n)];
    r.antennas = policies.front().at(n);
    for (int c = 0; c < cells; ++c) {
      const int mc = policies[static_cast<std::size_t>(c)].at(n);
      const double g = single_antenna_sinr(coupling, c, n, energy.rate_params(), expected);
      const double rate = energy.user_rate(n, mc, g);
      r.rate_bps += rate;
      r.power_w += energy.power(n, mc, rate).total;
      r.ee_bit_per_j += energy.energy_efficiency(n, mc, g);
    }
    r.rate_bps /= cells;
    r.power_w /= cells;
    r.ee_bit_per_j /= cells;
    out.push_back(r);
  }
  return out;
}

}  // namespace

CouplingMatrix build_coupling(const GeometryConfig& cfg) {
  return compute_coupling(build_layout(cfg), cfg);
}

RateParams dimensioned_rate(const RateParams& base, const DimensioningResult& dim) {
  RateParams r = base;
  r.k_max = dim.k_max;
  r.tx_power_per_antenna_w = dim.p_opt_w;
  r.validate();
  return r;
}

Calibration calibrate_queue(const CouplingMatrix& coupling, const EnergyModel& energy, int m_max,
                            double blocking_target, double traffic_per_user_bits, bool fixed_point,
                            int max_passes, int max_sweeps) {
  const int cells = coupling.num_cells();
  const int m = energy.rate_params().k_max;
  const std::vector<AntennaPolicy> all_max(static_cast<std::size_t>(cells), baseline_policy(m_max, m));

  Calibration cal;
  cal.profile = profile_from_policies(coupling, energy, all_max,
                                      constant_vector(cells, static_cast<double>(m_max)),
                                      traffic_per_user_bits);
  cal.a_max = calibrate_peak_load(cal.profile, blocking_target);
  cal.passes = 1;

  const int limit = fixed_point ? max_passes : 2;
  while (cal.passes < limit) {
    const auto dist = steady_state(cal.profile, cal.a_max);
    const AntennaGame game(coupling, energy, m_max, std::vector<StateDistribution>(static_cast<std::size_t>(cells), dist));
    EquilibriumOptions opts;
    opts.max_sweeps = max_sweeps;
    const auto eq = game.find_equilibrium(game.initial_state(true), opts);
    ServiceProfile next = profile_from_policies(coupling, energy, eq.policies, eq.expected_antennas,
                                                traffic_per_user_bits);
    const double a_next = calibrate_peak_load(next, blocking_target);
    const double shift = std::abs(a_next - cal.a_max) / cal.a_max;
    cal.profile = std::move(next);
    cal.a_max = a_next;
    ++cal.passes;
    if (fixed_point && shift < 1e-12) return cal;
  }
  if (fixed_point) {
    throw Error(ErrorKind::convergence, "peak-load calibration did not reach a fixed point within " +
                                            std::to_string(max_passes) + " passes");
  }
  return cal;
}

HourRecord run_hour(int hour, double load_fraction, const Calibration& calibration,
                    const CouplingMatrix& coupling, const EnergyModel& energy, int m_max,
                    int max_sweeps) {
  const int cells = coupling.num_cells();
  HourRecord rec;
  rec.hour = hour;
  rec.load_fraction = load_fraction;
  rec.offered_load = load_fraction * calibration.a_max;
  rec.distribution = steady_state(calibration.profile, rec.offered_load);

  const AntennaGame game(coupling, energy, m_max,
                         std::vector<StateDistribution>(static_cast<std::size_t>(cells), rec.distribution));
  EquilibriumOptions opts;
  opts.max_sweeps = max_sweeps;
  auto eq = game.find_equilibrium(game.initial_state(true), opts);
  for (auto& p : eq.policies) p.hour = hour;
  rec.sweeps = eq.iteration;
  rec.adaptive = state_records(rec.distribution, eq.policies, eq.expected_antennas, coupling, energy);

  const int m = rec.distribution.servers();
  std::vector<AntennaPolicy> base(static_cast<std::size_t>(cells), baseline_policy(m_max, m));
  const double base_expected = expected_antennas(base.front(), rec.distribution);
  rec.baseline = state_records(rec.distribution, base, constant_vector(cells, base_expected), coupling, energy);
  rec.policies = std::move(eq.policies);
  return rec;
}

Aggregate aggregate(const std::vector<HourRecord>& hours) {
  Aggregate agg;
  double gain_sum = 0.0;
  for (const auto& h : hours) {
    if (h.adaptive.size() != h.baseline.size() || h.adaptive.empty()) {
      throw_model("aggregate: adaptive and baseline state grids differ for hour " + std::to_string(h.hour));
    }
    const int m = static_cast<int>(h.adaptive.size()) - 1;
    HourSummary s;
    s.hour = h.hour;
    s.load_fraction = h.load_fraction;

    double served = 0.0, bits_a = 0.0, bits_b = 0.0, pw_a = 0.0, pw_b = 0.0;
    for (std::size_t i = 0; i < h.adaptive.size(); ++i) {
      const auto& a = h.adaptive[i];
      const auto& b = h.baseline[i];
      if (a.n != b.n || a.pi != b.pi) throw_model("aggregate: state grids differ");
      pw_a += a.pi * a.power_w;
      pw_b += b.pi * b.power_w;
      if (a.n == 0) continue;
      served += a.pi * a.n;
      bits_a += a.pi * a.n * a.rate_bps;
      bits_b += b.pi * b.n * b.rate_bps;
      s.state_rate_adaptive_bps += a.pi * a.rate_bps;
      s.state_rate_baseline_bps += b.pi * b.rate_bps;
      s.avg_ee_adaptive += a.pi * a.ee_bit_per_j;
      s.avg_ee_baseline += b.pi * b.ee_bit_per_j;
    }
    s.mean_occupancy_fraction = m > 0 ? served / m : 0.0;
    if (served > 0.0) {
      s.avg_rate_adaptive_bps = bits_a / served;
      s.avg_rate_baseline_bps = bits_b / served;
    }
    if (!(s.avg_ee_baseline > 0.0) || !(s.avg_rate_baseline_bps > 0.0)) {
      throw_model("aggregate: baseline carries no traffic in hour " + std::to_string(h.hour));
    }
    s.ee_gain = s.avg_ee_adaptive / s.avg_ee_baseline - 1.0;
    s.rate_ratio = s.avg_rate_adaptive_bps / s.avg_rate_baseline_bps;
    s.bits_adaptive = bits_a * kSecondsPerHour;
    s.bits_baseline = bits_b * kSecondsPerHour;
    s.energy_adaptive_j = pw_a * kSecondsPerHour;
    s.energy_baseline_j = pw_b * kSecondsPerHour;

    agg.overall.bits_adaptive += s.bits_adaptive;
    agg.overall.bits_baseline += s.bits_baseline;
    agg.overall.energy_adaptive_j += s.energy_adaptive_j;
    agg.overall.energy_baseline_j += s.energy_baseline_j;
    gain_sum += s.ee_gain;
    agg.hours.push_back(s);
  }
  if (!hours.empty()) {
    const auto& o = agg.overall;
    agg.overall.ee_gain_24h =
        (o.bits_adaptive / o.energy_adaptive_j) / (o.bits_baseline / o.energy_baseline_j) - 1.0;
    agg.overall.ee_gain_hourly_mean = gain_sum / static_cast<double>(hours.size());
  }
  return agg;
}

DailyReport run_scenario(const ScenarioConfig& cfg) {
  in_stage("config", [&] { cfg.validate(); });
  DailyReport report;
  const auto dlp = in_stage("load profile", [&] {
    auto full = LoadProfile::read(cfg.dlp_path);
    return cfg.hours < full.hours() ? full.first_hours(cfg.hours) : full;
  });
  if (cfg.hours > dlp.hours()) {
    throw Error(ErrorKind::config, "load profile: " + std::to_string(dlp.hours()) +
                                       " hours available, " + std::to_string(cfg.hours) + " requested");
  }

  report.coupling = in_stage("geometry", [&] { return build_coupling(cfg.geometry); });
  report.dimensioning = in_stage("dimensioning", [&] {
    return dimension_network(cfg.dimensioning, report.coupling, cfg.rate, cfg.pa, cfg.baseband);
  });
  const auto& dim = report.dimensioning.best;
  report.rate = in_stage("dimensioning", [&] { return dimensioned_rate(cfg.rate, dim); });
  const EnergyModel energy = in_stage("radio", [&] { return EnergyModel(report.rate, cfg.pa, cfg.baseband); });

  report.calibration = in_stage("calibration", [&] {
    return calibrate_queue(report.coupling, energy, dim.m_max, cfg.blocking_target,
                           cfg.traffic_per_user_bits, cfg.recalibrate_to_fixed_point,
                           cfg.max_recalibrations, cfg.max_sweeps);
  });

  for (int h = 0; h < dlp.hours(); ++h) {
    report.hours.push_back(in_stage("equilibrium", [&] {
      return run_hour(h + 1, dlp.hourly_fraction[static_cast<std::size_t>(h)], report.calibration,
                      report.coupling, energy, dim.m_max, cfg.max_sweeps);
    }));
  }
  report.aggregate = in_stage("aggregation", [&] { return aggregate(report.hours); });
  return report;
}

void emit_aggregate(const Aggregate& agg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

  CsvWriter report(dir / "report.csv",
                   {"hour", "load_fraction", "mean_occupancy_fraction", "avg_rate_adaptive_bps",
                    "avg_rate_baseline_bps", "state_rate_adaptive_bps", "state_rate_baseline_bps",
                    "avg_ee_adaptive_bit_per_j", "avg_ee_baseline_bit_per_j", "ee_gain", "rate_ratio",
                    "bits_adaptive", "energy_adaptive_j", "bits_baseline", "energy_baseline_j"});
  CsvWriter fig3(dir / "fig3.csv",
                 {"hour", "load_fraction", "mean_occupancy_fraction", "avg_rate_adaptive_bps",
                  "avg_rate_baseline_bps", "state_rate_adaptive_bps", "state_rate_baseline_bps"});
  CsvWriter fig4(dir / "fig4.csv", {"hour", "load_fraction", "mean_occupancy_fraction", "ee_gain"});
  CsvWriter fig5(dir / "fig5.csv", {"hour", "load_fraction", "ee_gain", "rate_ratio"});
  for (const auto& s : agg.hours) {
    const auto hour = static_cast<long long>(s.hour);
    report.row({hour, s.load_fraction, s.mean_occupancy_fraction, s.avg_rate_adaptive_bps,
                s.avg_rate_baseline_bps, s.state_rate_adaptive_bps, s.state_rate_baseline_bps,
                s.avg_ee_adaptive, s.avg_ee_baseline, s.ee_gain, s.rate_ratio, s.bits_adaptive,
                s.energy_adaptive_j, s.bits_baseline, s.energy_baseline_j});
    fig3.row({hour, s.load_fraction, s.mean_occupancy_fraction, s.avg_rate_adaptive_bps,
              s.avg_rate_baseline_bps, s.state_rate_adaptive_bps, s.state_rate_baseline_bps});
    fig4.row({hour, s.load_fraction, s.mean_occupancy_fraction, s.ee_gain});
    fig5.row({hour, s.load_fraction, s.ee_gain, s.rate_ratio});
  }
  report.close();
  fig3.close();
  fig4.close();
  fig5.close();

  CsvWriter gain(dir / "gain.csv", {"metric", "value"});
  if (!agg.hours.empty()) {
    const auto& o = agg.overall;
    gain.row({std::string("ee_gain_24h"), o.ee_gain_24h});
    gain.row({std::string("ee_gain_hourly_mean"), o.ee_gain_hourly_mean});
    gain.row({std::string("bits_adaptive"), o.bits_adaptive});
    gain.row({std::string("energy_adaptive_j"), o.energy_adaptive_j});
    gain.row({std::string("bits_baseline"), o.bits_baseline});
    gain.row({std::string("energy_baseline_j"), o.energy_baseline_j});
  }
  gain.close();
}

void emit_scenario(const DailyReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

  if (report.coupling.num_cells() > 0) write_coupling_csv(report.coupling, dir / "coupling.csv");

  CsvWriter dim(dir / "dimensioning.csv", {"K", "M", "p_w", "ee_bit_per_j"});
  for (const auto& pt : report.dimensioning.surface) {
    dim.row({static_cast<long long>(pt.k), static_cast<long long>(pt.m), pt.p_w, pt.ee});
  }
  dim.close();

  CsvWriter scenario(dir / "scenario.csv", {"metric", "value"});
  if (!report.dimensioning.surface.empty()) {
    const auto& b = report.dimensioning.best;
    scenario.row({std::string("k_max"), static_cast<double>(b.k_max)});
    scenario.row({std::string("m_max"), static_cast<double>(b.m_max)});
    scenario.row({std::string("p_opt_w"), b.p_opt_w});
    scenario.row({std::string("peak_ee_bit_per_j"), b.peak_ee});
  }
  if (report.calibration.passes > 0) {
    scenario.row({std::string("a_max"), report.calibration.a_max});
    scenario.row({std::string("calibration_passes"), static_cast<double>(report.calibration.passes)});
  }
  scenario.close();
}

void emit_outputs(const DailyReport& report, const std::filesystem::path& dir) {
  emit_scenario(report, dir);
  emit_aggregate(report.aggregate, dir);

  CsvWriter fig2(dir / "fig2.csv", {"hour", "load_fraction", "n", "M_adaptive", "M_baseline", "pi"});
  for (const auto& h : report.hours) {
    const auto hour = static_cast<long long>(h.hour);
    for (std::size_t i = 1; i < h.adaptive.size(); ++i) {
      fig2.row({hour, h.load_fraction, static_cast<long long>(h.adaptive[i].n),
                static_cast<long long>(h.adaptive[i].antennas),
                static_cast<long long>(h.baseline[i].antennas), h.adaptive[i].pi});
    }

    const auto tag = std::to_string(h.hour);
    write_occupancy_csv(h.distribution, dir / ("occupancy_h" + tag + ".csv"));

    CsvWriter policy(dir / ("policy_h" + tag + ".csv"), {"cell", "n", "M"});
    for (std::size_t c = 0; c < h.policies.size(); ++c) {
      for (int n = 1; n <= h.policies[c].states(); ++n) {
        policy.row({static_cast<long long>(c), static_cast<long long>(n),
                    static_cast<long long>(h.policies[c].at(n))});
      }
    }
    policy.close();

    CsvWriter states(dir / ("states_h" + tag + ".csv"),
                     {"hour", "load_fraction", "n", "pi", "M_adaptive", "rate_adaptive_bps",
                      "power_adaptive_w", "ee_adaptive_bit_per_j", "M_baseline", "rate_baseline_bps",
                      "power_baseline_w", "ee_baseline_bit_per_j"});
    for (std::size_t i = 0; i < h.adaptive.size(); ++i) {
      const auto& a = h.adaptive[i];
      const auto& b = h.baseline[i];
      states.row({hour, h.load_fraction, static_cast<long long>(a.n), a.pi,
                  static_cast<long long>(a.antennas), a.rate_bps, a.power_w, a.ee_bit_per_j,
                  static_cast<long long>(b.antennas), b.rate_bps, b.power_w, b.ee_bit_per_j});
    }
    states.close();
  }
  fig2.close();
}

std::vector<HourRecord> read_state_records(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, dir.string() + " is not a directory");
  const std::regex name(R"(states_h(\d+)\.csv)");
  std::map<int, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::smatch match;
    const auto fname = entry.path().filename().string();
    if (std::regex_match(fname, match, name)) files[std::stoi(match[1].str())] = entry.path();
  }

  std::vector<HourRecord> hours;
  for (const auto& [hour, path] : files) {
    const auto table = read_csv(path);
    const auto ctx = path.string();
    const auto col = [&](const char* c) { return table.column(c); };
    const auto i_load = col("load_fraction"), i_n = col("n"), i_pi = col("pi");
    const auto i_ma = col("M_adaptive"), i_ra = col("rate_adaptive_bps"), i_pa = col("power_adaptive_w"),
               i_ea = col("ee_adaptive_bit_per_j");
    const auto i_mb = col("M_baseline"), i_rb = col("rate_baseline_bps"), i_pb = col("power_baseline_w"),
               i_eb = col("ee_baseline_bit_per_j");
    HourRecord h;
    h.hour = hour;
    for (const auto& row : table.rows) {
      if (row.size() != table.header.size()) throw Error(ErrorKind::io, ctx + ": ragged row");
      h.load_fraction = parse_double(row[i_load], ctx);
      const int n = static_cast<int>(parse_int(row[i_n], ctx));
      const double pi = parse_double(row[i_pi], ctx);
      h.adaptive.push_back({n, pi, static_cast<int>(parse_int(row[i_ma], ctx)), parse_double(row[i_ra], ctx),
                            parse_double(row[i_pa], ctx), parse_double(row[i_ea], ctx)});
      h.baseline.push_back({n, pi, static_cast<int>(parse_int(row[i_mb], ctx)), parse_double(row[i_rb], ctx),
                            parse_double(row[i_pb], ctx), parse_double(row[i_eb], ctx)});
      h.distribution.pi.push_back(pi);
    }
    hours.push_back(std::move(h));
  }
  return hours;
}

}  // namespace lamimo
