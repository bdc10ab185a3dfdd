#include "lamimo/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "lamimo/error.hpp"

namespace lamimo {

void AntennaPolicy::validate(int m_max) const {
  for (int n = 1; n <= states(); ++n) {
    const int m = at(n);
    if (m < n + 1 || m > m_max) {
      throw_model("antenna policy infeasible at n=" + std::to_string(n) + ": M=" + std::to_string(m));
    }
  }
}

void DimensioningGrid::validate() const {
  if (k_min < 1 || k_max < k_min || k_step < 1) throw_config("dimensioning K grid", "empty or invalid");
  if (m_upper < k_min + 1) throw_config("dimensioning m_upper", "must exceed k_min");
  if (!(p_min_w > 0.0) || !(p_max_w >= p_min_w) || !(p_step_w > 0.0)) {
    throw_config("dimensioning p grid", "empty or invalid");
  }
}

std::vector<double> DimensioningGrid::power_values() const {
  // Integer multiples of the step so grid values print cleanly.
  const long long first = std::llround(std::ceil(p_min_w / p_step_w - 1e-9));
  const long long last = std::llround(std::floor(p_max_w / p_step_w + 1e-9));
  std::vector<double> out;
  for (long long i = std::max(first, 1LL); i <= last; ++i) out.push_back(static_cast<double>(i) * p_step_w);
  return out;
}

double expected_antennas(const AntennaPolicy& policy, const StateDistribution& dist) {
  if (dist.pi.size() != static_cast<std::size_t>(policy.states()) + 1) {
    throw_model("expected_antennas: policy covers " + std::to_string(policy.states()) +
                " states but distribution has " + std::to_string(dist.pi.size() - 1));
  }
  double s = 0.0;
  for (int n = 1; n <= policy.states(); ++n) {
    s += static_cast<double>(policy.at(n)) * dist.pi[static_cast<std::size_t>(n)];
  }
  return s;
}

namespace {

int sweep_argmax(int n_users, double gamma1, const EnergyModel& energy, int m_max) {
  int best_m = n_users + 1;
  double best = energy.energy_efficiency(n_users, best_m, gamma1);
  for (int m = n_users + 2; m <= m_max; ++m) {
    const double ee = energy.energy_efficiency(n_users, m, gamma1);
    if (ee > best) {
      best = ee;
      best_m = m;
    }
  }
  return best_m;
}

}  // namespace

int best_antenna_count(int n_users, int cell, const CouplingMatrix& coupling,
                       std::span<const double> expected_antennas_others, const EnergyModel& energy,
                       int m_max) {
  if (n_users < 1) throw_model("best_antenna_count: at least one user required");
  if (m_max <= n_users) throw_model("best_antenna_count: m_max must exceed the number of users");
  const double gamma1 = single_antenna_sinr(coupling, cell, n_users, energy.rate_params(),
                                            expected_antennas_others);
  return sweep_argmax(n_users, gamma1, energy, m_max);
}

AntennaPolicy baseline_policy(int m_max, int states) {
  if (states < 1) throw_model("baseline_policy: needs at least one state");
  if (m_max < states + 1) throw_model("baseline_policy: m_max must be at least m + 1");
  AntennaPolicy p;
  p.antennas.assign(static_cast<std::size_t>(states), m_max);
  return p;
}

AntennaGame::AntennaGame(CouplingMatrix coupling, EnergyModel energy, int m_max,
                         std::vector<StateDistribution> distributions)
    : coupling_(std::move(coupling)),
      energy_(std::move(energy)),
      m_max_(m_max),
      states_(0),
      distributions_(std::move(distributions)) {
  coupling_.validate();
  if (distributions_.size() != static_cast<std::size_t>(coupling_.num_cells())) {
    throw_model("AntennaGame: one state distribution per cell required");
  }
  states_ = distributions_.front().servers();
  for (const auto& d : distributions_) {
    if (d.servers() != states_) throw_model("AntennaGame: distributions differ in size");
  }
  if (states_ < 1) throw_model("AntennaGame: no user states");
  if (m_max_ < states_ + 1) throw_model("AntennaGame: m_max must be at least m + 1");
}

GameState AntennaGame::initial_state(bool all_max) const {
  GameState s;
  for (int c = 0; c < num_cells(); ++c) {
    AntennaPolicy p;
    p.antennas.resize(static_cast<std::size_t>(states_));
    for (int n = 1; n <= states_; ++n) p.antennas[static_cast<std::size_t>(n - 1)] = all_max ? m_max_ : n + 1;
    s.expected_antennas.push_back(expected_antennas(p, distribution(c)));
    s.policies.push_back(std::move(p));
  }
  return s;
}

double AntennaGame::sinr(int cell, int n_users, std::span<const double> expected) const {
  return single_antenna_sinr(coupling_, cell, n_users, energy_.rate_params(), expected);
}

AntennaPolicy AntennaGame::best_response_step(int cell, const GameState& state) const {
  if (state.policies.size() != static_cast<std::size_t>(num_cells()) ||
      state.expected_antennas.size() != static_cast<std::size_t>(num_cells())) {
    throw_model("best_response_step: game state does not match the network");
  }
  AntennaPolicy out;
  out.hour = state.policies[static_cast<std::size_t>(cell)].hour;
  out.antennas.resize(static_cast<std::size_t>(states_));
  for (int n = 1; n <= states_; ++n) {
    out.antennas[static_cast<std::size_t>(n - 1)] =
        best_antenna_count(n, cell, coupling_, state.expected_antennas, energy_, m_max_);
  }
  return out;
}

GameState AntennaGame::find_equilibrium(GameState state, const EquilibriumOptions& options) const {
  const int cells = num_cells();
  if (state.policies.size() != static_cast<std::size_t>(cells)) {
    throw_model("find_equilibrium: initial state has the wrong number of cells");
  }
  for (auto& p : state.policies) p.validate(m_max_);

  std::vector<int> order = options.cell_order;
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(cells));
    std::iota(order.begin(), order.end(), 0);
  }
  if (order.size() != static_cast<std::size_t>(cells)) throw_model("find_equilibrium: bad cell order");

  state.expected_antennas.resize(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    state.expected_antennas[static_cast<std::size_t>(c)] =
        expected_antennas(state.policies[static_cast<std::size_t>(c)], distribution(c));
  }
  state.converged = false;
  state.iteration = 0;

  std::vector<int> changed_per_sweep;
  while (state.iteration < options.max_sweeps) {
    ++state.iteration;
    int changed = 0;
    const GameState snapshot = options.mode == SweepMode::jacobi ? state : GameState{};
    for (int c : order) {
      const GameState& basis = options.mode == SweepMode::jacobi ? snapshot : state;
      AntennaPolicy next = best_response_step(c, basis);
      auto& current = state.policies[static_cast<std::size_t>(c)];
      for (int n = 1; n <= states_; ++n) changed += next.at(n) != current.at(n) ? 1 : 0;
      current = std::move(next);
      state.expected_antennas[static_cast<std::size_t>(c)] = expected_antennas(current, distribution(c));
    }
    changed_per_sweep.push_back(changed);
    if (changed == 0) {
      state.converged = true;
      return state;
    }
  }

  std::ostringstream msg;
  msg << "best-response iteration did not converge within " << options.max_sweeps << " sweeps";
  const auto k = changed_per_sweep.size();
  if (k >= 2) {
    msg << " (last two sweeps changed " << changed_per_sweep[k - 2] << " and "
        << changed_per_sweep[k - 1] << " antenna counts)";
  }
  throw Error(ErrorKind::convergence, msg.str());
}

DimensioningOutput dimension_network(const DimensioningGrid& grid, const CouplingMatrix& coupling,
                                     const RateParams& rate, const PAParams& pa,
                                     const BasebandCoeffs& bb) {
  grid.validate();
  coupling.validate();
  const int cells = coupling.num_cells();
  const auto powers = grid.power_values();

  DimensioningOutput out;
  bool found = false;
  std::vector<double> all_m(static_cast<std::size_t>(cells));
  for (int k = grid.k_min; k <= grid.k_max; k += grid.k_step) {
    for (double p : powers) {
      if (p > pa.max_output_power_w) continue;
      if (pa.strict_papr && p > pa.papr_limit_w() * (1.0 + 1e-12)) continue;
      RateParams r = rate;
      r.k_max = k;
      r.tx_power_per_antenna_w = p;
      if (!(k < r.coherence_symbols)) continue;
      const EnergyModel energy(r, pa, bb);
      for (int m = k + 1; m <= grid.m_upper; ++m) {
        std::fill(all_m.begin(), all_m.end(), static_cast<double>(m));
        double ee = 0.0;
        for (int c = 0; c < cells; ++c) {
          const double g = single_antenna_sinr(coupling, c, k, r, all_m);
          ee += energy.energy_efficiency(k, m, g);
        }
        ee /= static_cast<double>(cells);
        out.surface.push_back({k, m, p, ee});
        if (!found || ee > out.best.peak_ee) {
          out.best = {k, m, p, ee};
          found = true;
        }
      }
    }
  }
  if (!found) throw_config("dimensioning grid", "no feasible (K, M, p) point");
  return out;
}

}  // namespace lamimo
