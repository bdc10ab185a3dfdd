#include "lamimo/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lamimo/error.hpp"

namespace lamimo {

void ScenarioConfig::validate() const {
  geometry.validate();
  pa.validate();
  baseband.validate();
  if (!(rate.bandwidth_hz > 0.0)) throw_config("radio.bandwidth_hz", "must be positive");
  if (!(rate.coherence_symbols > 0.0)) throw_config("radio.coherence_symbols", "must be positive");
  if (!(rate.noise_power_w > 0.0)) throw_config("radio.noise_power", "must be positive");
  if (dlp_path.empty()) throw_config("traffic.dlp_path", "required");
  if (!std::filesystem::exists(dlp_path)) throw_config("traffic.dlp_path", dlp_path.string() + " does not exist");
  if (hours < 1) throw_config("traffic.hours", "must be at least 1");
  if (!(blocking_target > 0.0 && blocking_target < 1.0)) throw_config("traffic.blocking_target", "must lie in (0, 1)");
  if (!(traffic_per_user_bits > 0.0)) throw_config("traffic.traffic_per_user_bits", "must be positive");
  if (max_recalibrations < 1) throw_config("traffic.max_recalibrations", "must be at least 1");
  dimensioning.validate();
  if (dimensioning.k_max >= rate.coherence_symbols) {
    throw_config("dimensioning.k_max", "must be below radio.coherence_symbols");
  }
  if (max_sweeps < 1) throw_config("game.max_sweeps", "must be at least 1");
}

namespace {

using boost::property_tree::ptree;

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw_config(key, "not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw_config(key, "not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw_config(key, "not a boolean: '" + v + "'");
}

}  // namespace

ScenarioConfig load_config(const std::filesystem::path& path) {
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::config, std::string("cannot read config: ") + e.what());
  }
  const auto base = path.parent_path();
  ScenarioConfig cfg;
  auto resolve = [&base](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base / p;
  };

  using Setter = std::function<void(const std::string& key, const std::string& value)>;
  auto real = [](double& slot) { return Setter([&slot](auto& k, auto& v) { slot = to_double(k, v); }); };
  auto integer = [](int& slot) { return Setter([&slot](auto& k, auto& v) { slot = to_int(k, v); }); };
  auto flag = [](bool& slot) { return Setter([&slot](auto& k, auto& v) { slot = to_bool(k, v); }); };

  const std::map<std::string, Setter> setters = {
      {"geometry.cell_radius_m", real(cfg.geometry.cell_radius_m)},
      {"geometry.min_distance_m", real(cfg.geometry.min_distance_m)},
      {"geometry.num_cells", integer(cfg.geometry.num_cells)},
      {"geometry.grid_points_per_cell", integer(cfg.geometry.grid_points_per_cell)},
      {"geometry.pathloss_coeff", real(cfg.geometry.pathloss_coeff)},
      {"geometry.pathloss_coeff_log10",
       [&](auto& k, auto& v) { cfg.geometry.pathloss_coeff = std::pow(10.0, to_double(k, v)); }},
      {"geometry.pathloss_exponent", real(cfg.geometry.pathloss_exponent)},

      {"radio.bandwidth_hz", real(cfg.rate.bandwidth_hz)},
      {"radio.coherence_symbols", real(cfg.rate.coherence_symbols)},
      {"radio.noise_power_w", real(cfg.rate.noise_power_w)},
      {"radio.noise_power_dbm",
       [&](auto& k, auto& v) { cfg.rate.noise_power_w = std::pow(10.0, (to_double(k, v) - 30.0) / 10.0); }},

      {"pa.max_efficiency", real(cfg.pa.max_efficiency)},
      {"pa.max_output_power_w", real(cfg.pa.max_output_power_w)},
      {"pa.papr_backoff_db", real(cfg.pa.papr_backoff_db)},
      {"pa.strict_papr", flag(cfg.pa.strict_papr)},

      {"baseband.p_syn_w", real(cfg.baseband.p_syn_w)},
      {"baseband.p_bs_w", real(cfg.baseband.p_bs_w)},
      {"baseband.p_oth_w", real(cfg.baseband.p_oth_w)},
      {"baseband.p_cod_w_per_gbps",
       [&](auto& k, auto& v) { cfg.baseband.p_cod_w_per_bps = to_double(k, v) * 1e-9; }},
      {"baseband.p_dec_w_per_gbps",
       [&](auto& k, auto& v) { cfg.baseband.p_dec_w_per_bps = to_double(k, v) * 1e-9; }},
      {"baseband.l_bs_gflops_per_w",
       [&](auto& k, auto& v) { cfg.baseband.l_bs_flops_per_w = to_double(k, v) * 1e9; }},
      {"baseband.c12_coherence_normalized", flag(cfg.baseband.c12_coherence_normalized)},

      {"traffic.dlp_path", [&](auto&, auto& v) { cfg.dlp_path = resolve(v); }},
      {"traffic.hours", integer(cfg.hours)},
      {"traffic.blocking_target", real(cfg.blocking_target)},
      {"traffic.traffic_per_user_bits", real(cfg.traffic_per_user_bits)},
      {"traffic.recalibrate_to_fixed_point", flag(cfg.recalibrate_to_fixed_point)},
      {"traffic.max_recalibrations", integer(cfg.max_recalibrations)},

      {"dimensioning.k_min", integer(cfg.dimensioning.k_min)},
      {"dimensioning.k_max", integer(cfg.dimensioning.k_max)},
      {"dimensioning.k_step", integer(cfg.dimensioning.k_step)},
      {"dimensioning.m_upper", integer(cfg.dimensioning.m_upper)},
      {"dimensioning.p_min_w", real(cfg.dimensioning.p_min_w)},
      {"dimensioning.p_max_w", real(cfg.dimensioning.p_max_w)},
      {"dimensioning.p_step_w", real(cfg.dimensioning.p_step_w)},

      {"game.max_sweeps", integer(cfg.max_sweeps)},

      {"output.dir", [&](auto&, auto& v) { cfg.output_dir = resolve(v); }},
  };

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw_config(section, "keys must live inside a [section]");
    }
    for (const auto& [key, value] : body) {
      const auto full = section + "." + key;
      const auto it = setters.find(full);
      if (it == setters.end()) throw_config(full, "unknown key");
      it->second(full, value.data());
    }
  }
  return cfg;
}

}  // namespace lamimo
