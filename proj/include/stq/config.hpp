// Copyright 2026 The stqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stq/cavity.hpp"
#include "stq/hamiltonian.hpp"
#include "stq/noise.hpp"
#include "stq/serialize.hpp"
#include "stq/units.hpp"

namespace stq {

/// Device block of the run configuration. Frequencies enter as ordinary
/// GHz and are converted to rad/ns exactly once, here.
struct DeviceConfig {
  double delta_b_ghz = 2.5;
  double tau_ghz = 1.5;
  std::optional<double> epsilon_ghz;  // empty: operate at the TSS
  double eps_ac_ghz = 0.1;

  DeviceParams params() const {
    DeviceParams p{ghz_to_rad_ns(delta_b_ghz), ghz_to_rad_ns(tau_ghz), 0.0};
    p.epsilon = epsilon_ghz ? ghz_to_rad_ns(*epsilon_ghz)
                            : find_tss(p.delta_b, p.tau);
    p.validate();
    return p;
  }
  double eps_ac() const { return ghz_to_rad_ns(eps_ac_ghz); }
};

struct NoiseConfig {
  double alpha = 1.0;
  std::optional<double> a_t0 = 1e-3;   // dimensionless A*t0, used directly
  std::optional<double> sigma_uev;     // alternative: calibrate from sigma
  std::string calibration = "eq11_pi"; // or "plain"
  double omega_ir_ghz = 1e-4;
  double omega_uv_ghz = 20.0;
  int points_per_decade = 40;

  /// Spectral model in the gate's natural units: t0 = 1/omega0.
  SpectralModel model(double omega0) const {
    SpectralModel m;
    m.alpha = alpha;
    m.t0 = 1.0 / omega0;
    m.omega_ir = ghz_to_rad_ns(omega_ir_ghz);
    m.omega_uv = ghz_to_rad_ns(omega_uv_ghz);
    if (a_t0) {
      m.amplitude_a = *a_t0 / m.t0;
    } else if (sigma_uev) {
      const double sigma = *sigma_uev * kUevToRadNs;
      const CalibrationConvention conv = calibration == "plain"
                                             ? CalibrationConvention::plain
                                             : CalibrationConvention::eq11_pi;
      m.amplitude_a = calibrate_amplitude(sigma, m, conv);
    } else {
      throw config_error("noise config: need a_t0 or sigma_uev");
    }
    m.validate();
    return m;
  }
};

struct CavityRunConfig {
  double g_ghz = 0.1;
  double gamma_a_ghz = 2.8e-5;
  int n_max = 2;
  int qubit_levels = 2;
  double noise_scale = 0.44;
  bool correlated_noise = false;
  std::string metric = "state_transfer";
  std::vector<double> sigma_over_g = {0.0,  0.025, 0.05, 0.075, 0.1,
                                      0.125, 0.15, 0.175, 0.2};
  std::size_t n_realizations = 1000;

  CavityConfig config(double omega_r) const {
    CavityConfig c;
    c.omega_r = omega_r;
    c.g1 = c.g2 = ghz_to_rad_ns(g_ghz);
    c.gamma_a = ghz_to_rad_ns(gamma_a_ghz);
    c.n_max = n_max;
    c.qubit_levels = qubit_levels;
    c.noise_scale = noise_scale;
    c.correlated_noise = correlated_noise;
    c.validate();
    return c;
  }
};

struct SpectrumConfig {
  double eps_min_ghz = -10.0;
  double eps_max_ghz = 10.0;
  int points = 2001;
};

struct NoiseGenConfig {
  double dt_ns = 0.025;
  std::size_t n_samples = 65536;
};

struct McConfig {
  std::size_t n_realizations = 500;
  std::string metric = "trace";
};

struct RunConfig {
  DeviceConfig device;                  // delta_b > tau reference set
  DeviceConfig device_alt{1.5, 1.75};   // comparison set (delta_b < tau)
  NoiseConfig noise;
  CavityRunConfig cavity;
  SpectrumConfig spectrum;
  NoiseGenConfig noise_gen;
  McConfig mc;
  int filter_points_per_decade = 200;
  std::uint64_t seed = 12345;
  int threads = 0;

  json raw;  // as loaded, for hashing
};

namespace detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& context) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("unknown key '" + it.key() + "' in " + context);
}

inline void load_device(const json& j, DeviceConfig& d,
                        const std::string& ctx) {
  check_keys(j, {"delta_b_ghz", "tau_ghz", "epsilon_ghz", "eps_ac_ghz"}, ctx);
  d.delta_b_ghz = j.value("delta_b_ghz", d.delta_b_ghz);
  d.tau_ghz = j.value("tau_ghz", d.tau_ghz);
  if (j.contains("epsilon_ghz") && !j.at("epsilon_ghz").is_null())
    d.epsilon_ghz = j.at("epsilon_ghz").get<double>();
  d.eps_ac_ghz = j.value("eps_ac_ghz", d.eps_ac_ghz);
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.raw = j;
  detail::check_keys(j,
                     {"device", "device_alt", "noise", "cavity", "spectrum",
                      "noise_gen", "mc", "filter_points_per_decade", "seed",
                      "threads"},
                     "config");
  if (j.contains("device")) detail::load_device(j.at("device"), cfg.device, "device");
  if (j.contains("device_alt"))
    detail::load_device(j.at("device_alt"), cfg.device_alt, "device_alt");
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    detail::check_keys(n,
                       {"alpha", "a_t0", "sigma_uev", "calibration",
                        "omega_ir_ghz", "omega_uv_ghz", "points_per_decade"},
                       "noise");
    cfg.noise.alpha = n.value("alpha", cfg.noise.alpha);
    if (n.contains("a_t0")) {
      if (n.at("a_t0").is_null())
        cfg.noise.a_t0.reset();
      else
        cfg.noise.a_t0 = n.at("a_t0").get<double>();
    }
    if (n.contains("sigma_uev") && !n.at("sigma_uev").is_null()) {
      cfg.noise.sigma_uev = n.at("sigma_uev").get<double>();
      if (!n.contains("a_t0")) cfg.noise.a_t0.reset();
    }
    cfg.noise.calibration = n.value("calibration", cfg.noise.calibration);
    if (cfg.noise.calibration != "eq11_pi" && cfg.noise.calibration != "plain")
      throw config_error("noise.calibration must be eq11_pi or plain");
    cfg.noise.omega_ir_ghz = n.value("omega_ir_ghz", cfg.noise.omega_ir_ghz);
    cfg.noise.omega_uv_ghz = n.value("omega_uv_ghz", cfg.noise.omega_uv_ghz);
    cfg.noise.points_per_decade =
        n.value("points_per_decade", cfg.noise.points_per_decade);
  }
  if (j.contains("cavity")) {
    const json& c = j.at("cavity");
    detail::check_keys(c,
                       {"g_ghz", "gamma_a_ghz", "n_max", "qubit_levels",
                        "noise_scale", "correlated_noise", "metric",
                        "sigma_over_g", "n_realizations"},
                       "cavity");
    cfg.cavity.g_ghz = c.value("g_ghz", cfg.cavity.g_ghz);
    cfg.cavity.gamma_a_ghz = c.value("gamma_a_ghz", cfg.cavity.gamma_a_ghz);
    cfg.cavity.n_max = c.value("n_max", cfg.cavity.n_max);
    cfg.cavity.qubit_levels = c.value("qubit_levels", cfg.cavity.qubit_levels);
    cfg.cavity.noise_scale = c.value("noise_scale", cfg.cavity.noise_scale);
    cfg.cavity.correlated_noise =
        c.value("correlated_noise", cfg.cavity.correlated_noise);
    cfg.cavity.metric = c.value("metric", cfg.cavity.metric);
    metric_from_name(cfg.cavity.metric);  // validate
    if (c.contains("sigma_over_g"))
      cfg.cavity.sigma_over_g = c.at("sigma_over_g").get<std::vector<double>>();
    cfg.cavity.n_realizations =
        c.value("n_realizations", cfg.cavity.n_realizations);
  }
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    detail::check_keys(s, {"eps_min_ghz", "eps_max_ghz", "points"}, "spectrum");
    cfg.spectrum.eps_min_ghz = s.value("eps_min_ghz", cfg.spectrum.eps_min_ghz);
    cfg.spectrum.eps_max_ghz = s.value("eps_max_ghz", cfg.spectrum.eps_max_ghz);
    cfg.spectrum.points = s.value("points", cfg.spectrum.points);
    if (cfg.spectrum.points < 1)
      throw config_error("spectrum.points must be >= 1");
  }
  if (j.contains("noise_gen")) {
    const json& g = j.at("noise_gen");
    detail::check_keys(g, {"dt_ns", "n_samples"}, "noise_gen");
    cfg.noise_gen.dt_ns = g.value("dt_ns", cfg.noise_gen.dt_ns);
    cfg.noise_gen.n_samples = g.value("n_samples", cfg.noise_gen.n_samples);
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    detail::check_keys(m, {"n_realizations", "metric"}, "mc");
    cfg.mc.n_realizations = m.value("n_realizations", cfg.mc.n_realizations);
    cfg.mc.metric = m.value("metric", cfg.mc.metric);
    if (cfg.mc.metric != "trace" && cfg.mc.metric != "average")
      throw config_error("mc.metric must be trace or average");
  }
  cfg.filter_points_per_decade =
      j.value("filter_points_per_decade", cfg.filter_points_per_decade);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace stq
