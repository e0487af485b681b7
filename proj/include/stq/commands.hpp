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

#include <filesystem>
#include <string>
#include <vector>

#include "stq/cavity.hpp"
#include "stq/config.hpp"
#include "stq/dynamics.hpp"
#include "stq/filter.hpp"
#include "stq/hamiltonian.hpp"
#include "stq/noise.hpp"
#include "stq/pulses.hpp"
#include "stq/serialize.hpp"

namespace stq {

inline OutputMeta make_meta(const RunConfig& cfg, const std::string& cmd) {
  OutputMeta meta;
  meta.command = cmd;
  meta.config_sha = config_hash(cfg.raw);
  meta.seed = cfg.seed;
  return meta;
}

inline std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

/// Device summary at the operating point: TSS location, dipole, Rabi rate.
inline json device_summary(const DeviceConfig& dev) {
  const double delta_b = ghz_to_rad_ns(dev.delta_b_ghz);
  const double tau = ghz_to_rad_ns(dev.tau_ghz);
  const double eps_ss = find_tss(delta_b, tau);
  const DeviceParams at_tss{delta_b, tau, eps_ss};
  const EigenSystem sys = eigensystem(at_tss);
  return {{"delta_b_ghz", dev.delta_b_ghz},
          {"tau_ghz", dev.tau_ghz},
          {"eps_ss_ghz", rad_ns_to_ghz(eps_ss)},
          {"d_ge_abs", std::abs(sys.d_ge())},
          {"omega_q_ghz", rad_ns_to_ghz(sys.qubit_energy())},
          {"omega_ef_ghz", rad_ns_to_ghz(sys.ef_energy())},
          {"omega0_ghz", rad_ns_to_ghz(std::abs(sys.d_ge()) * dev.eps_ac())},
          {"slope_at_tss", qubit_energy_derivative(at_tss)}};
}

inline json cmd_tss(const RunConfig& cfg, const std::string& out_dir) {
  json j;
  j["meta"] = make_meta(cfg, "tss").as_json();
  j["device"] = device_summary(cfg.device);
  j["device_alt"] = device_summary(cfg.device_alt);
  write_json_file(out_path(out_dir, "tss.json"), j);
  return j;
}

/// Energy spectrum and qubit energy over a detuning scan, with a marker
/// on the grid point nearest the TSS.
inline void cmd_spectrum(const RunConfig& cfg, const std::string& out_dir) {
  const double delta_b = ghz_to_rad_ns(cfg.device.delta_b_ghz);
  const double tau = ghz_to_rad_ns(cfg.device.tau_ghz);
  const double eps_ss = find_tss(delta_b, tau);
  CsvWriter csv(out_path(out_dir, "spectrum.csv"), make_meta(cfg, "spectrum"),
                {"eps_ghz", "e_g_ghz", "e_e_ghz", "e_f_ghz", "omega_q_ghz",
                 "is_tss"});
  const int n = cfg.spectrum.points;
  double best = 1e300;
  int best_i = 0;
  std::vector<double> eps(n);
  for (int i = 0; i < n; ++i) {
    const double f =
        n == 1 ? cfg.spectrum.eps_min_ghz
               : cfg.spectrum.eps_min_ghz +
                     (cfg.spectrum.eps_max_ghz - cfg.spectrum.eps_min_ghz) *
                         i / (n - 1);
    eps[i] = f;
    if (std::abs(ghz_to_rad_ns(f) - eps_ss) < best) {
      best = std::abs(ghz_to_rad_ns(f) - eps_ss);
      best_i = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    const EigenSystem sys =
        eigensystem({delta_b, tau, ghz_to_rad_ns(eps[i])});
    csv.row({eps[i], rad_ns_to_ghz(sys.energies(0)),
             rad_ns_to_ghz(sys.energies(1)), rad_ns_to_ghz(sys.energies(2)),
             rad_ns_to_ghz(sys.qubit_energy()),
             static_cast<double>(i == best_i)});
  }
}

struct GateSetup {
  double omega0 = 0.0;  // rad/ns
  std::map<std::string, std::map<GateFamily, PulseSequence>> catalog;
  SpectralModel model;
};

inline GateSetup gate_setup(const RunConfig& cfg) {
  GateSetup gs;
  const DeviceParams params = cfg.device.params();
  const EigenSystem sys = eigensystem(params);
  gs.omega0 = std::abs(sys.d_ge()) * cfg.device.eps_ac();
  gs.catalog = clifford_catalog(gs.omega0);
  gs.model = cfg.noise.model(gs.omega0);
  return gs;
}

inline const std::array<GateFamily, 4> kAllFamilies = {
    GateFamily::naive, GateFamily::corpse, GateFamily::geometric,
    GateFamily::non_cyclic};

/// Filter transfer function CSV for one catalog gate/family or for a
/// pulse sequence loaded from JSON, on a log grid of omega/omega0.
inline void cmd_filter_fn(const RunConfig& cfg, const std::string& out_dir,
                          const std::string& gate, const std::string& family,
                          const std::string& sequence_file = "") {
  GateSetup gs = gate_setup(cfg);
  PulseSequence seq;
  std::string label;
  if (!sequence_file.empty()) {
    std::ifstream in(sequence_file);
    if (!in) throw config_error("cannot open sequence file: " + sequence_file);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw config_error(std::string("sequence parse error: ") + e.what());
    }
    seq = sequence_from_json(j);
    for (auto& s : seq.segments) s.omega0 = gs.omega0;
    label = "custom";
  } else {
    if (!gs.catalog.count(gate)) throw config_error("unknown gate: " + gate);
    seq = gs.catalog.at(gate).at(family_from_name(family));
    label = gate + "_" + family;
  }
  CsvWriter csv(out_path(out_dir, "filter_fn_" + label + ".csv"),
                make_meta(cfg, "filter-fn"),
                {"omega_over_omega0", "fz_over_omega2"});
  const int per_decade = 50;
  for (int i = 0; i <= 6 * per_decade; ++i) {
    const double x = std::pow(10.0, -3.0 + static_cast<double>(i) / per_decade);
    csv.row({x, fz_over_w2(seq, x * gs.omega0) * gs.omega0 * gs.omega0});
  }
}

/// The 16 filter-route fidelities plus per-gate F_z curves; optionally the
/// time-domain Monte-Carlo cross-check.
inline json cmd_fig4(const RunConfig& cfg, const std::string& out_dir,
                     bool with_mc = false) {
  GateSetup gs = gate_setup(cfg);
  json table;
  table["meta"] = make_meta(cfg, "fig4").as_json();
  table["omega0_ghz"] = rad_ns_to_ghz(gs.omega0);
  table["a_t0"] = gs.model.amplitude_a * gs.model.t0;
  for (const auto& gate : kCatalogGates) {
    for (GateFamily fam : kAllFamilies) {
      const double f = fidelity_from_spectrum(gs.catalog.at(gate).at(fam),
                                              gs.model,
                                              cfg.filter_points_per_decade);
      table["fidelity"][gate][family_name(fam)] = f;
    }
    CsvWriter csv(out_path(out_dir, std::string("fig4_fz_") + gate + ".csv"),
                  make_meta(cfg, "fig4"),
                  {"omega_over_omega0", "naive", "corpse", "geometric",
                   "non_cyclic"});
    const int per_decade = 50;
    for (int i = 0; i <= 5 * per_decade; ++i) {
      const double x =
          std::pow(10.0, -3.0 + static_cast<double>(i) / per_decade);
      std::vector<double> row{x};
      for (GateFamily fam : kAllFamilies)
        row.push_back(fz_over_w2(gs.catalog.at(gate).at(fam), x * gs.omega0) *
                      gs.omega0 * gs.omega0);
      csv.row(row);
    }
  }
  if (with_mc) {
    const FidelityMetric metric = cfg.mc.metric == "average"
                                      ? FidelityMetric::average
                                      : FidelityMetric::trace;
    for (const auto& gate : kCatalogGates) {
      for (GateFamily fam : kAllFamilies) {
        const McReport rep = monte_carlo_fidelity(
            gs.catalog.at(gate).at(fam), gs.model, cfg.mc.n_realizations,
            mix_seed(cfg.seed, std::hash<std::string>{}(
                                   std::string(gate) + family_name(fam))),
            metric, 1.0, cfg.threads);
        table["monte_carlo"][gate][family_name(fam)] = {
            {"mean", rep.mean}, {"stderr", rep.stderr_}, {"n", rep.n},
            {"seed", rep.seed}};
      }
    }
  }
  write_json_file(out_path(out_dir, "fig4_fidelities.json"), table);
  return table;
}

/// Three-level pi-pulse propagation: populations and leakage summary.
inline json cmd_leakage(const RunConfig& cfg, const std::string& out_dir) {
  const DeviceParams params = cfg.device.params();
  const RotatingFrameModel model =
      make_resonant_model(params, cfg.device.eps_ac(), /*rwa=*/false);
  PulseSequence seq = naive_sequence({{0.0, kPi}}, {1, 0, 0}, kPi,
                                     model.omega0());
  Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
  rho0(1, 1) = 1.0;  // |0> = |e>
  const PropagationResult res = propagate(model, seq, rho0);
  CsvWriter csv(out_path(out_dir, "leakage_trajectory.csv"),
                make_meta(cfg, "leakage"), {"t_ns", "p0", "p1", "pf"});
  for (const auto& s : res.trajectory) csv.row({s.t, s.p0, s.p1, s.pf});
  json j;
  j["meta"] = make_meta(cfg, "leakage").as_json();
  j["max_pf"] = res.max_pf;
  j["final_p0"] = std::real(res.rho_final(1, 1));
  j["final_p1"] = std::real(res.rho_final(0, 0));
  write_json_file(out_path(out_dir, "leakage_summary.json"), j);
  return j;
}

/// Sample one calibrated noise trace to CSV plus the model parameters.
inline void cmd_noise_gen(const RunConfig& cfg, const std::string& out_dir) {
  GateSetup gs = gate_setup(cfg);
  const NoiseTrace trace =
      generate_trace(gs.model, cfg.noise_gen.dt_ns, cfg.noise_gen.n_samples,
                     cfg.seed, cfg.noise.points_per_decade);
  CsvWriter csv(out_path(out_dir, "noise_trace.csv"),
                make_meta(cfg, "noise-gen"), {"t_ns", "delta_rad_per_ns"});
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    csv.row({static_cast<double>(i) * trace.dt, trace.samples[i]});
  json j = to_json(gs.model);
  j["meta"] = make_meta(cfg, "noise-gen").as_json();
  j["variance_rad2_ns2"] = gs.model.variance();
  write_json_file(out_path(out_dir, "noise_model.json"), j);
}

/// Entangling-gate populations (noiseless) and the noise sweep, for both
/// parameter sets.
inline json cmd_fig5(const RunConfig& cfg, const std::string& out_dir) {
  json j;
  j["meta"] = make_meta(cfg, "fig5").as_json();
  const std::array<std::pair<std::string, const DeviceConfig*>, 2> sets = {
      std::make_pair(std::string("b_gt_t"), &cfg.device),
      std::make_pair(std::string("b_lt_t"), &cfg.device_alt)};
  for (const auto& [tag, dev] : sets) {
    const double delta_b = ghz_to_rad_ns(dev->delta_b_ghz);
    const double tau = ghz_to_rad_ns(dev->tau_ghz);
    const double eps_ss = find_tss(delta_b, tau);
    const EigenSystem sys = eigensystem({delta_b, tau, eps_ss});
    const CavityConfig cav = cfg.cavity.config(sys.qubit_energy());

    // noiseless population transfer
    {
      CavityConfig capped = cav;
      capped.max_excitation = 1;
      const HybridOps ops = effective_hamiltonian(capped, sys, sys);
      const EntanglerSpec spec =
          entangler_spec(ops.omega_ge[0], ops.omega_ge[1]);
      Eigen::MatrixXcd rho0 =
          Eigen::MatrixXcd::Zero(ops.space.dim(), ops.space.dim());
      const int ge0 = ops.space.find(0, 1, 0);
      const int eg0 = ops.space.find(1, 0, 0);
      rho0(ge0, ge0) = 1.0;
      const LindbladResult res = evolve_lindblad(ops, capped, ops.h0, rho0,
                                                 spec.duration, 128);
      CsvWriter csv(out_path(out_dir, "fig5_populations_" + tag + ".csv"),
                    make_meta(cfg, "fig5"), {"t_ns", "p_ge0", "p_eg0"});
      for (std::size_t i = 0; i < res.times.size(); ++i)
        csv.row({res.times[i], res.populations[i](ge0),
                 res.populations[i](eg0)});
      j[tag]["final_p_eg0"] = res.populations.back()(eg0);
      j[tag]["duration_ns"] = spec.duration;
      j[tag]["omega_prime_ghz"] = rad_ns_to_ghz(ops.omega_ge[0]);
    }

    const std::vector<SweepPoint> sweep = fidelity_sweep(
        cav, sys, sys, cfg.cavity.sigma_over_g, cfg.cavity.n_realizations,
        mix_seed(cfg.seed, tag == "b_gt_t" ? 1 : 2),
        metric_from_name(cfg.cavity.metric), cfg.threads);
    CsvWriter csv(out_path(out_dir, "fig5_sweep_" + tag + ".csv"),
                  make_meta(cfg, "fig5"),
                  {"sigma_over_g", "mean_fidelity", "stderr", "n"});
    for (const auto& pt : sweep) {
      csv.row({pt.sigma_over_g, pt.mean, pt.stderr_,
               static_cast<double>(pt.n)});
      j[tag]["sweep"].push_back({{"sigma_over_g", pt.sigma_over_g},
                                 {"mean", pt.mean},
                                 {"stderr", pt.stderr_},
                                 {"n", pt.n}});
    }
  }
  write_json_file(out_path(out_dir, "fig5_summary.json"), j);
  return j;
}

}  // namespace stq
