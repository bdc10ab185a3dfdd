#pragma once

#include <filesystem>
#include <vector>

#include "lamimo/config.hpp"
#include "lamimo/geometry.hpp"
#include "lamimo/optimizer.hpp"
#include "lamimo/queue.hpp"
#include "lamimo/radio.hpp"

namespace lamimo {

/// Per user state, averaged over cells. State 0 carries the idle power.
struct StateRecord {
  int n = 0;
  double pi = 0.0;
  int antennas = 0;        // cell 0's choice; policy_h*.csv has every cell
  double rate_bps = 0.0;   // per user
  double power_w = 0.0;
  double ee_bit_per_j = 0.0;
};

struct HourRecord {
  int hour = 0;  // 1-based
  double load_fraction = 0.0;
  double offered_load = 0.0;
  int sweeps = 0;
  std::vector<StateRecord> adaptive;  // n = 0..m
  std::vector<StateRecord> baseline;
  std::vector<AntennaPolicy> policies;  // converged adaptive policy per cell
  StateDistribution distribution;
};

struct HourSummary {
  int hour = 0;
  double load_fraction = 0.0;
  double mean_occupancy_fraction = 0.0;  // E[n] / m
  double avg_rate_adaptive_bps = 0.0;    // served-user weighted
  double avg_rate_baseline_bps = 0.0;
  double state_rate_adaptive_bps = 0.0;  // sum_{n>=1} pi(n) R(n)
  double state_rate_baseline_bps = 0.0;
  double avg_ee_adaptive = 0.0;          // sum_{n>=1} pi(n) EE(n)
  double avg_ee_baseline = 0.0;
  double ee_gain = 0.0;                  // avg_ee_adaptive / avg_ee_baseline - 1
  double rate_ratio = 0.0;               // avg_rate_adaptive / avg_rate_baseline
  double bits_adaptive = 0.0;            // over the hour
  double energy_adaptive_j = 0.0;
  double bits_baseline = 0.0;
  double energy_baseline_j = 0.0;
};

struct OverallSummary {
  double ee_gain_24h = 0.0;         // from day totals: bits per Joule ratio - 1
  double ee_gain_hourly_mean = 0.0; // mean of hourly gains
  double bits_adaptive = 0.0;
  double energy_adaptive_j = 0.0;
  double bits_baseline = 0.0;
  double energy_baseline_j = 0.0;
};

struct Aggregate {
  std::vector<HourSummary> hours;
  OverallSummary overall;
};

struct Calibration {
  ServiceProfile profile;  // R(n) feeding the queue for every hour
  double a_max = 0.0;
  int passes = 0;          // calibrations performed
};

struct DailyReport {
  CouplingMatrix coupling;
  DimensioningOutput dimensioning;
  RateParams rate;  // with the dimensioned K_max and p
  Calibration calibration;
  std::vector<HourRecord> hours;
  Aggregate aggregate;
};

/// Layout and coupling for the configured geometry.
CouplingMatrix build_coupling(const GeometryConfig& cfg);

/// Rate parameters with K_max and p taken from a dimensioning result.
RateParams dimensioned_rate(const RateParams& base, const DimensioningResult& dim);

/// Peak-hour queue calibration. R(n) first comes from every cell running M_max
/// antennas at full interference; the pipeline then solves the peak-hour
/// equilibrium and recalibrates once on its rates (or until a_max stops
/// moving when `fixed_point` is set).
Calibration calibrate_queue(const CouplingMatrix& coupling, const EnergyModel& energy, int m_max,
                            double blocking_target, double traffic_per_user_bits, bool fixed_point,
                            int max_passes, int max_sweeps);

/// Equilibrium, baseline and per-state metrics for one hour.
HourRecord run_hour(int hour, double load_fraction, const Calibration& calibration,
                    const CouplingMatrix& coupling, const EnergyModel& energy, int m_max,
                    int max_sweeps);

/// Baseline and adaptive per-hour and whole-day figures.
Aggregate aggregate(const std::vector<HourRecord>& hours);

DailyReport run_scenario(const ScenarioConfig& cfg);

/// Writes report.csv, states_h{h}.csv, policy_h{h}.csv, occupancy_h{h}.csv,
/// fig2..fig5.csv, gain.csv, scenario.csv, coupling.csv and dimensioning.csv.
void emit_outputs(const DailyReport& report, const std::filesystem::path& dir);

/// Writes coupling.csv, dimensioning.csv and scenario.csv (calibration rows
/// only once a calibration has run).
void emit_scenario(const DailyReport& report, const std::filesystem::path& dir);

/// Writes only the aggregate-derived files (report.csv, fig3..fig5.csv, gain.csv).
void emit_aggregate(const Aggregate& agg, const std::filesystem::path& dir);

/// Rebuilds hour records from states_h*.csv files in `dir`.
std::vector<HourRecord> read_state_records(const std::filesystem::path& dir);

}  // namespace lamimo
