#pragma once

#include <span>
#include <vector>

#include "lamimo/geometry.hpp"
#include "lamimo/queue.hpp"
#include "lamimo/radio.hpp"

namespace lamimo {

/// Antennas to activate in each user state: antennas[n-1] = M(n), n = 1..m.
struct AntennaPolicy {
  std::vector<int> antennas;
  int hour = 0;

  int states() const { return static_cast<int>(antennas.size()); }
  int at(int n) const { return antennas[static_cast<std::size_t>(n - 1)]; }

  /// Throws unless n + 1 <= M(n) <= m_max for every state.
  void validate(int m_max) const;

  friend bool operator==(const AntennaPolicy& a, const AntennaPolicy& b) {
    return a.antennas == b.antennas;
  }
};

struct GameState {
  std::vector<AntennaPolicy> policies;   // one per cell
  std::vector<double> expected_antennas;  // sum_n M_c(n) pi_c(n) per cell
  int iteration = 0;                      // full sweeps performed
  bool converged = false;                 // last sweep changed nothing
};

struct DimensioningResult {
  int k_max = 0;
  int m_max = 0;
  double p_opt_w = 0.0;
  double peak_ee = 0.0;  // bit/J
};

struct DimensioningPoint {
  int k = 0;
  int m = 0;
  double p_w = 0.0;
  double ee = 0.0;
};

/// Exhaustive search grid for peak-load dimensioning. M runs over
/// [K + 1, m_upper]; p over multiples of p_step_w in [p_min_w, p_max_w] that
/// the PA admits.
struct DimensioningGrid {
  int k_min = 93;
  int k_max = 93;
  int k_step = 1;
  int m_upper = 1000;
  double p_min_w = 0.001;
  double p_max_w = 0.2;
  double p_step_w = 0.001;

  void validate() const;
  std::vector<double> power_values() const;
};

struct DimensioningOutput {
  DimensioningResult best;
  std::vector<DimensioningPoint> surface;  // every evaluated grid point, search order
};

/// sum_{n=1}^m M(n) pi(n); the empty state contributes no antennas.
double expected_antennas(const AntennaPolicy& policy, const StateDistribution& dist);

/// argmax of EE over integer M in [n+1, m_max]; ties go to the smaller M.
int best_antenna_count(int n_users, int cell, const CouplingMatrix& coupling,
                       std::span<const double> expected_antennas_others, const EnergyModel& energy,
                       int m_max);

/// All M_max: the reference system that never adapts.
AntennaPolicy baseline_policy(int m_max, int states);

enum class SweepMode {
  gauss_seidel,  // later cells see earlier cells' updates within a sweep
  jacobi,        // all cells respond to the previous sweep's state
};

struct EquilibriumOptions {
  int max_sweeps = 100;
  SweepMode mode = SweepMode::gauss_seidel;
  std::vector<int> cell_order;  // empty: 0..C-1
};

/// The multi-cell antenna game of one hour: each cell picks M(n) per user
/// state against the expected antenna counts of the other cells.
class AntennaGame {
 public:
  AntennaGame(CouplingMatrix coupling, EnergyModel energy, int m_max,
              std::vector<StateDistribution> distributions);

  int num_cells() const { return coupling_.num_cells(); }
  int states() const { return states_; }
  int m_max() const { return m_max_; }
  const CouplingMatrix& coupling() const { return coupling_; }
  const EnergyModel& energy() const { return energy_; }
  const StateDistribution& distribution(int cell) const {
    return distributions_[static_cast<std::size_t>(cell)];
  }

  /// Every cell at the same per-state count: M_max, or n + 1 when `all_max` is false.
  GameState initial_state(bool all_max = true) const;

  /// Best-response vector of `cell` against the other cells' expected antennas in `state`.
  AntennaPolicy best_response_step(int cell, const GameState& state) const;

  /// Best-response sweeps until one full sweep changes nothing. Throws
  /// Error(convergence) after options.max_sweeps sweeps.
  GameState find_equilibrium(GameState initial, const EquilibriumOptions& options = {}) const;

  /// gamma_{c,1} for `cell` with n users against `state`'s expected antennas.
  double sinr(int cell, int n_users, std::span<const double> expected) const;

 private:
  CouplingMatrix coupling_;
  EnergyModel energy_;
  int m_max_;
  int states_;
  std::vector<StateDistribution> distributions_;
};

/// Exhaustive (K, M, p) search of cell-averaged EE with every cell serving K
/// users on M antennas. The rate overhead uses the candidate K as K_max.
DimensioningOutput dimension_network(const DimensioningGrid& grid, const CouplingMatrix& coupling,
                                     const RateParams& rate, const PAParams& pa,
                                     const BasebandCoeffs& bb);

}  // namespace lamimo
