// lamimo: load-adaptive massive MIMO energy-efficiency simulator.
//
//   lamimo dimension --config cfg.ini [--out DIR]
//   lamimo calibrate --config cfg.ini [--out DIR]
//   lamimo run       --config cfg.ini [--out DIR] [--hours N] [--dlp PATH]
//   lamimo report    --out DIR
//
// Exit codes: 0 success, 1 config error, 2 convergence failure, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "lamimo/config.hpp"
#include "lamimo/csv.hpp"
#include "lamimo/error.hpp"
#include "lamimo/runner.hpp"

namespace {

using namespace lamimo;

struct Options {
  std::string config;
  std::string out;
  int hours = 0;
  std::string dlp;
};

ScenarioConfig load(const Options& o, bool need_dlp) {
  ScenarioConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.dlp.empty()) cfg.dlp_path = o.dlp;
  if (o.hours > 0) cfg.hours = o.hours;
  if (!need_dlp && cfg.dlp_path.empty()) cfg.dlp_path = o.config;  // not read by these stages
  cfg.validate();
  return cfg;
}

DailyReport dimension(const ScenarioConfig& cfg) {
  DailyReport r;
  r.coupling = build_coupling(cfg.geometry);
  r.dimensioning = dimension_network(cfg.dimensioning, r.coupling, cfg.rate, cfg.pa, cfg.baseband);
  r.rate = dimensioned_rate(cfg.rate, r.dimensioning.best);
  return r;
}

void print_scenario(const DailyReport& r) {
  const auto& b = r.dimensioning.best;
  std::printf("K_max=%d M_max=%d p_opt=%s W peak_EE=%s bit/J\n", b.k_max, b.m_max,
              format_double(b.p_opt_w).c_str(), format_double(b.peak_ee).c_str());
  if (r.calibration.passes > 0) {
    std::printf("a_max=%s (calibration passes %d)\n", format_double(r.calibration.a_max).c_str(),
                r.calibration.passes);
  }
}

int cmd_dimension(const Options& o) {
  const auto cfg = load(o, false);
  const auto r = dimension(cfg);
  emit_scenario(r, cfg.output_dir);
  print_scenario(r);
  return 0;
}

int cmd_calibrate(const Options& o) {
  const auto cfg = load(o, false);
  auto r = dimension(cfg);
  const EnergyModel energy(r.rate, cfg.pa, cfg.baseband);
  r.calibration = calibrate_queue(r.coupling, energy, r.dimensioning.best.m_max, cfg.blocking_target,
                                  cfg.traffic_per_user_bits, cfg.recalibrate_to_fixed_point,
                                  cfg.max_recalibrations, cfg.max_sweeps);
  emit_scenario(r, cfg.output_dir);
  write_occupancy_csv(steady_state(r.calibration.profile, r.calibration.a_max),
                      cfg.output_dir / "occupancy_peak.csv");
  print_scenario(r);
  return 0;
}

int cmd_run(const Options& o) {
  const auto cfg = load(o, true);
  const auto r = run_scenario(cfg);
  emit_outputs(r, cfg.output_dir);
  print_scenario(r);
  std::printf("hours=%zu EE_gain_24h=%s EE_gain_hourly_mean=%s\n", r.hours.size(),
              format_double(r.aggregate.overall.ee_gain_24h).c_str(),
              format_double(r.aggregate.overall.ee_gain_hourly_mean).c_str());
  return 0;
}

int cmd_report(const Options& o) {
  if (o.out.empty()) throw Error(ErrorKind::config, "report: --out DIR is required");
  const auto hours = read_state_records(o.out);
  if (hours.empty()) throw Error(ErrorKind::io, "report: no states_h*.csv files in " + o.out);
  const auto agg = aggregate(hours);
  emit_aggregate(agg, o.out);
  std::printf("hours=%zu EE_gain_24h=%s\n", hours.size(), format_double(agg.overall.ee_gain_24h).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Load-adaptive massive MIMO energy-efficiency simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "Scenario INI file");
    if (config_required) c->required();
    sub->add_option("--out", o.out, "Output directory (overrides output.dir)");
  };
  auto* dim = app.add_subcommand("dimension", "Choose K_max, M_max and p; write dimensioning.csv");
  add_common(dim, true);
  auto* cal = app.add_subcommand("calibrate", "Dimension, then calibrate the peak offered load");
  add_common(cal, true);
  auto* run = app.add_subcommand("run", "Full 24-hour pipeline");
  add_common(run, true);
  run->add_option("--hours", o.hours, "Simulate only the first N hours")->check(CLI::PositiveNumber);
  run->add_option("--dlp", o.dlp, "Daily load profile CSV (overrides traffic.dlp_path)");
  auto* rep = app.add_subcommand("report", "Re-aggregate states_h*.csv in --out");
  add_common(rep, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::config);
  }

  try {
    if (*dim) return cmd_dimension(o);
    if (*cal) return cmd_calibrate(o);
    if (*run) return cmd_run(o);
    return cmd_report(o);
  } catch (const Error& e) {
    std::fprintf(stderr, "lamimo: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lamimo: unexpected error: %s\n", e.what());
    return exit_code(ErrorKind::model);
  }
}
