#include "lamimo/radio.hpp"

#include <string>

#include "lamimo/error.hpp"

namespace lamimo {

void RateParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw_config("bandwidth_hz", "must be positive");
  if (!(coherence_symbols > 0.0)) throw_config("coherence_symbols", "must be positive");
  if (k_max <= 0 || !(k_max < coherence_symbols)) {
    throw_config("k_max", "must satisfy 0 < k_max < coherence_symbols");
  }
  if (!(noise_power_w > 0.0)) throw_config("noise_power_w", "must be positive");
  if (!(tx_power_per_antenna_w > 0.0)) throw_config("tx_power_per_antenna_w", "must be positive");
}

void PAParams::validate() const {
  if (!(max_efficiency > 0.0 && max_efficiency <= 1.0)) {
    throw_config("max_efficiency", "must be in (0, 1]");
  }
  if (!(max_output_power_w > 0.0)) throw_config("max_output_power_w", "must be positive");
  if (!(papr_backoff_db >= 0.0)) throw_config("papr_backoff_db", "must be non-negative");
}

void BasebandCoeffs::validate() const {
  if (!(p_syn_w >= 0.0)) throw_config("p_syn_w", "must be non-negative");
  if (!(p_bs_w >= 0.0)) throw_config("p_bs_w", "must be non-negative");
  if (!(p_oth_w >= 0.0)) throw_config("p_oth_w", "must be non-negative");
  if (!(p_cod_w_per_bps >= 0.0)) throw_config("p_cod", "must be non-negative");
  if (!(p_dec_w_per_bps >= 0.0)) throw_config("p_dec", "must be non-negative");
  if (!(l_bs_flops_per_w > 0.0)) throw_config("l_bs", "must be positive");
}

CircuitCoefficients BasebandCoeffs::coefficients(const RateParams& rate) const {
  const double b = rate.bandwidth_hz;
  const double tc = rate.coherence_symbols;
  const double l = l_bs_flops_per_w;
  CircuitCoefficients k;
  k.c0 = {p_syn_w, 0.0, 0.0, b / (3.0 * tc * l)};
  k.c1 = {p_bs_w, (b / l) * (2.0 + 1.0 / tc),
          c12_coherence_normalized ? 3.0 * b / (tc * l) : 3.0 * b / l};
  k.coding_w_per_bps = p_cod_w_per_bps + p_dec_w_per_bps;
  return k;
}

double pa_power(double mean_power_w, const PAParams& pa) {
  if (!(mean_power_w >= 0.0)) throw_model("pa_power: mean power must be non-negative");
  if (mean_power_w > pa.max_output_power_w) {
    throw_model("pa_power: mean power " + std::to_string(mean_power_w) +
                " W exceeds the PA maximum output");
  }
  const double limit = pa.papr_limit_w();
  if (pa.strict_papr && mean_power_w > limit * (1.0 + 1e-12)) {
    throw Error(ErrorKind::papr, "pa_power: mean power " + std::to_string(mean_power_w) +
                                     " W leaves less than the PAPR backoff (limit " +
                                     std::to_string(limit) + " W)");
  }
  return std::sqrt(mean_power_w * pa.max_output_power_w) / pa.max_efficiency;
}

EnergyModel::EnergyModel(const RateParams& rate, const PAParams& pa, const BasebandCoeffs& bb)
    : rate_(rate), pa_(pa), bb_(bb) {
  rate_.validate();
  pa_.validate();
  bb_.validate();
  coeff_ = bb_.coefficients(rate_);
  pa_input_w_ = pa_power(rate_.tx_power_per_antenna_w, pa_);
}

double EnergyModel::user_rate(int n_users, int m_antennas, double gamma1) const {
  if (n_users < 1) throw_model("user_rate: at least one user required");
  if (m_antennas < n_users) throw_model("user_rate: fewer antennas than users");
  const double m = m_antennas;
  const double gain = gamma1 * (m * m - static_cast<double>(n_users) * m);
  return rate_.beta() * std::log1p(gain);
}

PowerBreakdown EnergyModel::power(int n_users, int m_antennas, double rate_bps) const {
  if (n_users < 0 || m_antennas < 0) throw_model("total_power: negative counts");
  if (!(rate_bps >= 0.0)) throw_model("total_power: negative rate");
  const double k = n_users;
  const auto& c = coeff_;
  PowerBreakdown p;
  p.c0 = c.coding_w_per_bps * k * rate_bps + c.c0[0] + c.c0[1] * k + c.c0[2] * k * k +
         c.c0[3] * k * k * k + bb_.p_oth_w;
  p.c1 = c.c1[0] + c.c1[1] * k + c.c1[2] * k * k + pa_input_w_;
  p.total = p.c0 + p.c1 * static_cast<double>(m_antennas);
  return p;
}

double EnergyModel::energy_efficiency(int n_users, int m_antennas, double gamma1) const {
  if (n_users < 1) throw_model("energy_efficiency: at least one user required");
  if (m_antennas < n_users + 1) throw_model("energy_efficiency: requires M >= n + 1");
  const double r = user_rate(n_users, m_antennas, gamma1);
  return static_cast<double>(n_users) * r / power(n_users, m_antennas, r).total;
}

double single_antenna_sinr(const CouplingMatrix& coupling, int cell, int n_users,
                           const RateParams& rate, std::span<const double> expected_antennas) {
  if (n_users < 1) throw_model("single_antenna_sinr: zero users");
  const int cells = coupling.num_cells();
  if (cell < 0 || cell >= cells) throw_model("single_antenna_sinr: cell index out of range");
  if (expected_antennas.size() != static_cast<std::size_t>(cells)) {
    throw_model("single_antenna_sinr: expected antenna vector has wrong length");
  }
  const double p = rate.tx_power_per_antenna_w;
  const auto& row = coupling.lambda_cross[static_cast<std::size_t>(cell)];
  double interference = 0.0;
  for (int d = 0; d < cells; ++d) {
    if (d == cell) continue;
    const double md = expected_antennas[static_cast<std::size_t>(d)];
    if (!(md >= 0.0)) throw_model("single_antenna_sinr: negative antenna count");
    interference += row[static_cast<std::size_t>(d)] * p * md;
  }
  const double noise = coupling.lambda_serving[static_cast<std::size_t>(cell)] * rate.noise_power_w;
  return (p / static_cast<double>(n_users)) / (noise + interference);
}

double user_rate(int n_users, int m_antennas, double gamma1, const RateParams& rate) {
  if (n_users < 1) throw_model("user_rate: at least one user required");
  if (m_antennas < n_users) throw_model("user_rate: fewer antennas than users");
  rate.validate();
  const double m = m_antennas;
  return rate.beta() * std::log1p(gamma1 * (m * m - static_cast<double>(n_users) * m));
}

PowerBreakdown total_power(int n_users, int m_antennas, double rate_bps, const PAParams& pa,
                           const BasebandCoeffs& bb, const RateParams& rate) {
  return EnergyModel(rate, pa, bb).power(n_users, m_antennas, rate_bps);
}

double energy_efficiency(int n_users, int m_antennas, double gamma1, const RateParams& rate,
                         const PAParams& pa, const BasebandCoeffs& bb) {
  return EnergyModel(rate, pa, bb).energy_efficiency(n_users, m_antennas, gamma1);
}

}  // namespace lamimo
