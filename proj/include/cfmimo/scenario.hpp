/*
 * Copyright 2026 The cfmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CFMIMO_SCENARIO_HPP
#define CFMIMO_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfmimo/large_scale.hpp"

namespace cfmimo {

using Json = nlohmann::json;

enum class RateMode { kSpectral, kNet };

inline std::string to_string(RateMode mode) {
  return mode == RateMode::kSpectral ? "spectral" : "net";
}

/// sigma2 = 10^((psd_dBm_per_Hz + 10 log10(BW) + NF - 30) / 10) watts.
inline double noise_power(double psd_dBm_per_Hz, double bandwidth_Hz, double noise_figure_dB) {
  if (!(bandwidth_Hz > 0.0)) throw ConfigError("noise_power: bandwidth must be positive");
  double dbm = psd_dBm_per_Hz + 10.0 * std::log10(bandwidth_Hz) + noise_figure_dB;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

/// Full experiment configuration. The flat key-value config file uses exactly
/// these field names.
struct ScenarioConfig {
  int M = 100;
  int K = 40;
  int D = 4;
  double L_m = 1000.0;
  double P_ap_W = 0.2;
  double P_ms_W = 0.1;
  double tau_c = 200.0;
  int tau_p = 15;
  double tau_dl = 92.5;
  double tau_ul = 92.5;
  double noise_psd_dBm_per_Hz = -174.0;
  double noise_figure_dB = 9.0;
  double bandwidth_Hz = 20e6;
  double carrier_freq_MHz = 1900.0;
  double ap_height_m = 15.0;
  double ms_height_m = 1.65;
  double d0_m = 10.0;
  double d1_m = 50.0;
  double shadow_sigma_dB = 8.0;
  double shadow_delta = 0.5;
  double decorr_dist_m = 100.0;
  int n_throws = 200;
  int n_fading = 1000;
  int n_mc = 1000;
  double bisect_tol = 1e-4;
  std::uint64_t master_seed = 1;
  std::vector<std::string> strategies = {"sc", "wc", "nc"};
  RateMode rate_mode = RateMode::kSpectral;

  LargeScaleParams large_scale_params() const {
    LargeScaleParams p;
    p.carrier_freq_MHz = carrier_freq_MHz;
    p.ap_height_m = ap_height_m;
    p.ms_height_m = ms_height_m;
    p.d0_m = d0_m;
    p.d1_m = d1_m;
    p.shadow_sigma_dB = shadow_sigma_dB;
    p.shadow_delta = shadow_delta;
    p.decorr_dist_m = decorr_dist_m;
    return p;
  }

  double sigma2_W() const { return noise_power(noise_psd_dBm_per_Hz, bandwidth_Hz, noise_figure_dB); }

  /// Multiplier turning log2(1+SINR) into the configured rate unit.
  double rate_prefactor() const {
    return rate_mode == RateMode::kSpectral ? 1.0 : (tau_dl / tau_c) * bandwidth_Hz;
  }

  void validate() const {
    if (M < 1 || K < 1) throw ConfigError("config: M and K must be >= 1");
    if (D < 1 || D > M) throw ConfigError("config: need 1 <= D <= M");
    if (!(L_m > 0.0)) throw ConfigError("config: L_m must be positive");
    if (!(P_ap_W > 0.0) || !(P_ms_W > 0.0)) throw ConfigError("config: powers must be positive");
    if (tau_p < 1) throw ConfigError("config: tau_p must be >= 1");
    if (tau_dl < 0.0 || tau_ul < 0.0) throw ConfigError("config: frame phases must be >= 0");
    if (tau_p + tau_dl + tau_ul > tau_c + 1e-9) {
      std::ostringstream oss;
      oss << "config: frame budget violated, the constraint tau_p + tau_dl + tau_ul <= tau_c "
          << "requires " << tau_p << " + " << tau_dl << " + " << tau_ul << " <= " << tau_c;
      throw ConfigError(oss.str());
    }
    if (!(bandwidth_Hz > 0.0)) throw ConfigError("config: bandwidth must be positive");
    if (n_throws < 1 || n_fading < 1 || n_mc < 1) {
      throw ConfigError("config: n_throws, n_fading and n_mc must be >= 1");
    }
    if (!(bisect_tol > 0.0)) throw ConfigError("config: bisect_tol must be positive");
    if (strategies.empty()) throw ConfigError("config: at least one strategy required");
    for (const auto& s : strategies) {
      if (s != "sc" && s != "wc" && s != "nc") {
        throw ConfigError("config: unknown strategy '" + s + "'");
      }
    }
    large_scale_params().validate();
  }
};

/// Reduced preset sized for quick runs: 30 APs on a 500 m square, 12 users,
/// 3 CPUs, 20 throws x 50 fading draws. Power and shadowing are tuned so the
/// miniature stays in the qualitative regime of the full-size system (per-AP
/// budgets not the bottleneck, mostly user-side shadowing).
inline ScenarioConfig desk_scale_config() {
  ScenarioConfig cfg;
  cfg.M = 30;
  cfg.K = 12;
  cfg.D = 3;
  cfg.L_m = 500.0;
  cfg.P_ap_W = 2.0;
  cfg.tau_p = 8;
  cfg.tau_dl = 96.0;
  cfg.tau_ul = 96.0;
  cfg.shadow_delta = 0.1;
  cfg.n_throws = 20;
  cfg.n_fading = 50;
  cfg.n_mc = 1000;
  cfg.master_seed = 7;
  return cfg;
}

/// Full-size preset (long-running): 100 APs on a 1000 m square, 200 throws
/// x 1000 fading draws.
inline ScenarioConfig paper_scale_config() { return ScenarioConfig{}; }

inline std::vector<std::string> parse_strategies(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline Json config_to_json(const ScenarioConfig& c) {
  return Json{{"M", c.M},
              {"K", c.K},
              {"D", c.D},
              {"L_m", c.L_m},
              {"P_ap_W", c.P_ap_W},
              {"P_ms_W", c.P_ms_W},
              {"tau_c", c.tau_c},
              {"tau_p", c.tau_p},
              {"tau_dl", c.tau_dl},
              {"tau_ul", c.tau_ul},
              {"noise_psd_dBm_per_Hz", c.noise_psd_dBm_per_Hz},
              {"noise_figure_dB", c.noise_figure_dB},
              {"bandwidth_Hz", c.bandwidth_Hz},
              {"carrier_freq_MHz", c.carrier_freq_MHz},
              {"ap_height_m", c.ap_height_m},
              {"ms_height_m", c.ms_height_m},
              {"d0_m", c.d0_m},
              {"d1_m", c.d1_m},
              {"shadow_sigma_dB", c.shadow_sigma_dB},
              {"shadow_delta", c.shadow_delta},
              {"decorr_dist_m", c.decorr_dist_m},
              {"n_throws", c.n_throws},
              {"n_fading", c.n_fading},
              {"n_mc", c.n_mc},
              {"bisect_tol", c.bisect_tol},
              {"master_seed", c.master_seed},
              {"strategies", c.strategies},
              {"rate_mode", to_string(c.rate_mode)}};
}

inline ScenarioConfig config_from_json(const Json& j, ScenarioConfig base = {}) {
  ScenarioConfig c = base;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("M", c.M);
  get("K", c.K);
  get("D", c.D);
  get("L_m", c.L_m);
  get("P_ap_W", c.P_ap_W);
  get("P_ms_W", c.P_ms_W);
  get("tau_c", c.tau_c);
  get("tau_p", c.tau_p);
  get("tau_dl", c.tau_dl);
  get("tau_ul", c.tau_ul);
  get("noise_psd_dBm_per_Hz", c.noise_psd_dBm_per_Hz);
  get("noise_figure_dB", c.noise_figure_dB);
  get("bandwidth_Hz", c.bandwidth_Hz);
  get("carrier_freq_MHz", c.carrier_freq_MHz);
  get("ap_height_m", c.ap_height_m);
  get("ms_height_m", c.ms_height_m);
  get("d0_m", c.d0_m);
  get("d1_m", c.d1_m);
  get("shadow_sigma_dB", c.shadow_sigma_dB);
  get("shadow_delta", c.shadow_delta);
  get("decorr_dist_m", c.decorr_dist_m);
  get("n_throws", c.n_throws);
  get("n_fading", c.n_fading);
  get("n_mc", c.n_mc);
  get("bisect_tol", c.bisect_tol);
  get("master_seed", c.master_seed);
  if (j.contains("strategies")) {
    if (j.at("strategies").is_string()) {
      c.strategies = parse_strategies(j.at("strategies").get<std::string>());
    } else {
      c.strategies = j.at("strategies").get<std::vector<std::string>>();
    }
  }
  if (j.contains("rate_mode")) {
    std::string mode = j.at("rate_mode").get<std::string>();
    if (mode == "spectral") {
      c.rate_mode = RateMode::kSpectral;
    } else if (mode == "net") {
      c.rate_mode = RateMode::kNet;
    } else {
      throw ConfigError("config: rate_mode must be 'spectral' or 'net'");
    }
  }

  static const std::vector<std::string> known = {
      "M", "K", "D", "L_m", "P_ap_W", "P_ms_W", "tau_c", "tau_p", "tau_dl", "tau_ul",
      "noise_psd_dBm_per_Hz", "noise_figure_dB", "bandwidth_Hz", "carrier_freq_MHz",
      "ap_height_m", "ms_height_m", "d0_m", "d1_m", "shadow_sigma_dB", "shadow_delta",
      "decorr_dist_m", "n_throws", "n_fading", "n_mc", "bisect_tol", "master_seed",
      "strategies", "rate_mode"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError("config: unknown key '" + it.key() + "'");
    }
  }
  return c;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: parse failure in '" + path + "': " + e.what());
  }
  return config_from_json(j, base);
}

/// Rate of one user: spectral mode gives log2(1+SINR) in bit/s/Hz, net mode
/// scales by the downlink fraction of the coherence interval and the
/// bandwidth, giving bit/s.
inline double compute_rate(double sinr, const ScenarioConfig& cfg) {
  if (sinr < 0.0) throw ConfigError("compute_rate: sinr must be >= 0");
  return cfg.rate_prefactor() * std::log2(1.0 + sinr);
}

}  // namespace cfmimo

#endif  // CFMIMO_SCENARIO_HPP
