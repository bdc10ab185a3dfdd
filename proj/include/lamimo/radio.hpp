#pragma once

#include <array>
#include <cmath>
#include <span>

#include "lamimo/geometry.hpp"

namespace lamimo {

/// Downlink rate model inputs.
struct RateParams {
  double bandwidth_hz = 20e6;
  double coherence_symbols = 1800.0;
  int k_max = 93;  // pilot overhead: users served at most
  double noise_power_w = std::pow(10.0, (-96.0 - 30.0) / 10.0);  // total noise over B
  double tx_power_per_antenna_w = 0.098;

  void validate() const;

  /// Fraction of the coherence interval left for data, 1 - K_max / T_c.
  double overhead_factor() const { return 1.0 - static_cast<double>(k_max) / coherence_symbols; }

  /// overhead_factor * B / ln 2, the prefactor of the natural-log rate form.
  double beta() const { return overhead_factor() * bandwidth_hz / std::log(2.0); }
};

/// Power amplifier: input power (1/eta) * sqrt(p * P_max) for mean output p.
struct PAParams {
  double max_efficiency = 0.8;
  // Sized so the 8 dB PAPR backoff admits exactly p = 0.098 W.
  double max_output_power_w = 0.098 * std::pow(10.0, 0.8);
  double papr_backoff_db = 8.0;
  bool strict_papr = true;  // mean power above the backoff limit is an error

  void validate() const;

  /// Largest mean output power that leaves the PAPR headroom.
  double papr_limit_w() const { return max_output_power_w / std::pow(10.0, papr_backoff_db / 10.0); }
};

/// Polynomial coefficients of the baseband power in the number of users K:
/// P_BB = A*K*R + sum_i c0[i] K^i + M * sum_i c1[i] K^i.
struct CircuitCoefficients {
  std::array<double, 4> c0{};
  std::array<double, 3> c1{};
  double coding_w_per_bps = 0.0;  // A = P_COD + P_DEC
};

/// Circuit and baseband power constants.
struct BasebandCoeffs {
  double p_syn_w = 2.0;                  // local oscillator
  double p_bs_w = 1.0;                   // per-antenna transceiver chain
  double p_oth_w = 18.0;                 // load-independent site power
  double p_cod_w_per_bps = 0.1e-9;       // 0.1 W per Gbit/s
  double p_dec_w_per_bps = 0.8e-9;       // 0.8 W per Gbit/s
  double l_bs_flops_per_w = 12.8e9;      // computational efficiency
  // Divide the K^2 per-antenna precoding term by T_c (per-coherence-block
  // computation). false reproduces 3B/L_BS without the T_c factor.
  bool c12_coherence_normalized = true;

  void validate() const;

  CircuitCoefficients coefficients(const RateParams& rate) const;
};

struct PowerBreakdown {
  double c0 = 0.0;     // W, independent of the antenna count
  double c1 = 0.0;     // W per active antenna
  double total = 0.0;  // c0 + c1 * M
};

/// Precomputed view of the power and rate model used in the inner sweeps.
/// The free functions below evaluate through this class, so both paths agree
/// bit for bit.
class EnergyModel {
 public:
  EnergyModel(const RateParams& rate, const PAParams& pa, const BasebandCoeffs& bb);

  const RateParams& rate_params() const { return rate_; }
  const PAParams& pa_params() const { return pa_; }
  const BasebandCoeffs& baseband() const { return bb_; }
  const CircuitCoefficients& coefficients() const { return coeff_; }
  double pa_input_w() const { return pa_input_w_; }

  double user_rate(int n_users, int m_antennas, double gamma1) const;
  PowerBreakdown power(int n_users, int m_antennas, double rate_bps) const;
  double energy_efficiency(int n_users, int m_antennas, double gamma1) const;

  /// Power drawn when the cell has no user and every antenna is off.
  double idle_power() const { return power(0, 0, 0.0).total; }

 private:
  RateParams rate_;
  PAParams pa_;
  BasebandCoeffs bb_;
  CircuitCoefficients coeff_;
  double pa_input_w_ = 0.0;
};

/// SINR per user if cell `cell` served `n_users` with a single antenna,
/// (p/n) / (lambda_cc * noise + sum_{d != c} lambda_cd * p * M_d).
/// `expected_antennas` holds M_d for every cell; the entry for `cell` is ignored.
double single_antenna_sinr(const CouplingMatrix& coupling, int cell, int n_users,
                           const RateParams& rate, std::span<const double> expected_antennas);

/// Average per-user rate (bit/s) with ZF over `m_antennas` >= `n_users`.
double user_rate(int n_users, int m_antennas, double gamma1, const RateParams& rate);

/// PA input power for mean output `mean_power_w`.
double pa_power(double mean_power_w, const PAParams& pa);

PowerBreakdown total_power(int n_users, int m_antennas, double rate_bps, const PAParams& pa,
                           const BasebandCoeffs& bb, const RateParams& rate);

/// Bits per Joule: n * user_rate / total_power. Requires m_antennas >= n_users + 1.
double energy_efficiency(int n_users, int m_antennas, double gamma1, const RateParams& rate,
                         const PAParams& pa, const BasebandCoeffs& bb);

}  // namespace lamimo
