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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the binary exits nonzero if any fails.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <map>
#include <string>

#include "oracles.hpp"
#include "stq/cavity.hpp"
#include "stq/commands.hpp"
#include "stq/dynamics.hpp"
#include "stq/filter.hpp"
#include "stq/noise.hpp"
#include "stq/pulses.hpp"

using namespace stq;

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s (%s; %.1f s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  REQUIRE(pass);
}

constexpr double kEpsAcGhz = 0.1;

DeviceParams set_a() {
  const double db = ghz_to_rad_ns(2.5), tau = ghz_to_rad_ns(1.5);
  return {db, tau, find_tss(db, tau)};
}

GateSetup default_setup() { return gate_setup(parse_config(json::object())); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("criterion 1: sweet-spot location and dipole element") {
  Stopwatch sw;
  const double eps_ss = find_tss(ghz_to_rad_ns(2.5), ghz_to_rad_ns(1.5));
  const EigenSystem sys =
      eigensystem({ghz_to_rad_ns(2.5), ghz_to_rad_ns(1.5), eps_ss});
  const double eps_ghz = rad_ns_to_ghz(eps_ss);
  const double dge = std::abs(sys.d_ge());
  char detail[128];
  std::snprintf(detail, sizeof detail, "eps_ss=%.5f GHz, |d_ge|=%.5f",
                eps_ghz, dge);
  const bool pass = std::abs(eps_ghz - 1.91935) <= 1e-4 &&
                    std::abs(dge - 0.45055) <= 1e-4 && sw.seconds() < 1.0;
  report(1, "TSS at 1.91935 GHz with |d_ge| = 0.45055", pass, detail,
         sw.seconds());
}

TEST_CASE("criterion 2: filter-route fidelity table") {
  Stopwatch sw;
  const std::map<std::string, std::map<std::string, double>> caption = {
      {"x_pi2", {{"naive", 0.9978}, {"corpse", 0.9961},
                 {"geometric", 0.9959}, {"non_cyclic", 0.9960}}},
      {"z_pi2", {{"naive", 0.9886}, {"corpse", 0.9871},
                 {"geometric", 0.9947}, {"non_cyclic", 0.9947}}},
      {"xyz_4pi3", {{"naive", 0.9939}, {"corpse", 0.9916},
                    {"geometric", 0.9889}, {"non_cyclic", 0.9947}}},
      {"xz_pi", {{"naive", 0.9929}, {"corpse", 0.9901},
                 {"geometric", 0.9918}, {"non_cyclic", 0.9929}}}};
  GateSetup gs = default_setup();
  bool pass = true;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [gate, row] : caption) {
    for (const auto& [fam, expect] : row) {
      const double got = fidelity_from_spectrum(
          gs.catalog.at(gate).at(family_from_name(fam)), gs.model);
      const double err = std::abs(got - expect);
      if (err > worst) {
        worst = err;
        worst_name = gate + "/" + fam;
      }
      if (err > 5e-4) pass = false;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail, "16 gates, worst |dF|=%.2e at %s",
                worst, worst_name.c_str());
  pass = pass && sw.seconds() < 60.0;
  report(2, "all 16 fidelities within 5e-4 of the reference table", pass,
         detail, sw.seconds());
}

TEST_CASE("criterion 3: analytic vs numeric composite filter function") {
  Stopwatch sw;
  PulseSequence seq = corpse_sequence(0.0, 0.5 * kPi);  // Rabi units
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double w = std::pow(10.0, -3.0 + 5.0 * i / 49.0);
    const double numeric = fz_over_w2(seq, w);
    const double analytic = oracles::corpse_x90_fz_over_w2(w);
    worst = std::max(worst, std::abs(numeric - analytic) / std::abs(analytic));
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "worst rel err %.2e over 50 points",
                worst);
  const bool pass = worst <= 1e-6 && sw.seconds() < 10.0;
  report(3, "closed-form composite filter function matches the pipeline",
         pass, detail, sw.seconds());
}

TEST_CASE("criterion 4: three-level leakage validation") {
  Stopwatch sw;
  const RotatingFrameModel model =
      make_resonant_model(set_a(), ghz_to_rad_ns(kEpsAcGhz));
  PulseSequence seq =
      naive_sequence({{0.0, kPi}}, {1, 0, 0}, kPi, model.omega0());
  Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
  rho0(1, 1) = 1.0;
  const PropagationResult res = propagate(model, seq, rho0);
  const double final_p0 = std::real(res.rho_final(1, 1));
  char detail[96];
  std::snprintf(detail, sizeof detail, "max P_f=%.2e, final P_0=%.2e",
                res.max_pf, final_p0);
  const bool pass = res.max_pf >= 1e-5 && res.max_pf <= 1e-3 &&
                    final_p0 <= 1e-5 && sw.seconds() < 60.0;
  report(4, "pi-pulse leakage at the 1e-4 scale, final P_0 below 1e-5", pass,
         detail, sw.seconds());
}

TEST_CASE("criterion 5: quasi-static infidelity scaling laws") {
  Stopwatch sw;
  const auto cat = clifford_catalog();
  std::vector<double> deltas;
  for (int i = 0; i < 10; ++i)
    deltas.push_back(1e-3 * std::pow(30.0, i / 9.0));
  bool pass = true;
  std::string detail;
  for (GateFamily fam : {GateFamily::naive, GateFamily::geometric,
                         GateFamily::non_cyclic, GateFamily::corpse}) {
    const PulseSequence& seq = cat.at("x_pi2").at(fam);
    const Matrix2cd target = seq.target_unitary();
    std::vector<double> infid;
    for (double d : deltas)
      infid.push_back(1.0 - trace_fidelity(target, sequence_unitary(seq, d)));
    const double slope = fit_slope(deltas, infid);
    const double want = fam == GateFamily::corpse ? 4.0 : 2.0;
    const double tol = fam == GateFamily::corpse ? 0.2 : 0.1;
    if (std::abs(slope - want) > tol) pass = false;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%s=%.2f", detail.empty() ? "" : ", ",
                  family_name(fam), slope);
    detail += buf;
  }
  pass = pass && sw.seconds() < 60.0;
  report(5, "slope 2 for simple families, slope 4 for the composite", pass,
         detail, sw.seconds());
}

TEST_CASE("criterion 6: noise generator spectrum and calibration") {
  Stopwatch sw;
  SpectralModel m;
  m.alpha = 1.0;
  m.t0 = 1.0 / 0.2830893;
  m.omega_ir = ghz_to_rad_ns(1e-4);
  m.omega_uv = ghz_to_rad_ns(20.0);
  const double sigma = 0.02 * kUevToRadNs;
  m.amplitude_a = calibrate_amplitude(sigma, m);

  const double dt = kPi / m.omega_uv / 2.0;
  const std::size_t n = 1 << 16;
  std::vector<double> mean_psd;
  std::vector<double> omega;
  for (int seed = 0; seed < 100; ++seed) {
    const PsdEstimate est = psd_estimate(generate_trace(m, dt, n, seed));
    if (mean_psd.empty()) {
      mean_psd.assign(est.psd.size(), 0.0);
      omega = est.omega;
    }
    for (std::size_t i = 0; i < est.psd.size(); ++i)
      mean_psd[i] += est.psd[i] / 100.0;
  }
  PsdEstimate avg;
  avg.omega = omega;
  avg.psd = mean_psd;
  const double wc = std::sqrt(m.omega_ir * m.omega_uv);
  const double slope =
      psd_loglog_slope(avg, wc / std::sqrt(10.0), wc * std::sqrt(10.0));

  double acc = 0.0;
  std::size_t count = 0;
  for (int seed = 1000; seed < 1400; ++seed) {
    const NoiseTrace tr = generate_trace(m, dt, 64, seed);
    for (double v : tr.samples) acc += v * v;
    count += tr.samples.size();
  }
  const double var_ratio = (acc / count) / (sigma * sigma);

  char detail[96];
  std::snprintf(detail, sizeof detail, "slope=%.3f, variance ratio=%.3f",
                slope, var_ratio);
  const bool pass = std::abs(slope + 1.0) <= 0.1 &&
                    std::abs(var_ratio - 1.0) <= 0.10 && sw.seconds() < 60.0;
  report(6, "one-over-f slope and calibrated variance", pass, detail,
         sw.seconds());
}

TEST_CASE("criterion 7: filter route vs time-domain Monte Carlo") {
  Stopwatch sw;
  GateSetup gs = default_setup();
  bool pass = true;
  double worst_pull = 0.0;
  std::string worst_name;
  std::size_t idx = 0;
  for (const auto& gate : kCatalogGates) {
    for (GateFamily fam : kAllFamilies) {
      const PulseSequence& seq = gs.catalog.at(gate).at(fam);
      const double predicted = fidelity_from_spectrum(seq, gs.model);
      const McReport mc =
          monte_carlo_fidelity(seq, gs.model, 500, mix_seed(777, idx++));
      const double pull = std::abs(mc.mean - predicted) / mc.stderr_;
      if (pull > worst_pull) {
        worst_pull = pull;
        worst_name = std::string(gate) + "/" + family_name(fam);
      }
      if (pull > 3.0) pass = false;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof detail,
                "500 traces x 16 gates, worst pull %.2f sigma at %s",
                worst_pull, worst_name.c_str());
  pass = pass && sw.seconds() < 1200.0;
  report(7, "Monte-Carlo fidelity within 3 standard errors of the spectral "
            "route", pass, detail, sw.seconds());
}

TEST_CASE("criterion 8: two-qubit entangling-gate sweep") {
  Stopwatch sw;
  const RunConfig cfg = parse_config(json::object());
  bool pass = true;
  std::string detail;
  auto run_point = [&](const DeviceConfig& dev, double sig, std::uint64_t seed) {
    const double db = ghz_to_rad_ns(dev.delta_b_ghz);
    const double tau = ghz_to_rad_ns(dev.tau_ghz);
    const EigenSystem sys = eigensystem({db, tau, find_tss(db, tau)});
    const CavityConfig cav = cfg.cavity.config(sys.qubit_energy());
    return fidelity_sweep(cav, sys, sys, {sig}, 1000, seed)[0];
  };
  const SweepPoint a05 = run_point(cfg.device, 0.05, 1001);
  const SweepPoint a20 = run_point(cfg.device, 0.20, 1002);
  const SweepPoint b20 = run_point(cfg.device_alt, 0.20, 1003);
  if (std::abs(a05.mean - 0.9963) > 0.003) pass = false;
  if (a20.mean < 0.97) pass = false;
  if (std::abs(b20.mean - 0.92) > 0.01) pass = false;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "F(0.05)=%.4f+-%.4f, F(0.2)=%.4f, F_alt(0.2)=%.4f", a05.mean,
                a05.stderr_, a20.mean, b20.mean);
  detail = buf;
  pass = pass && sw.seconds() < 1800.0;
  report(8, "noise sweep anchors for both parameter sets", pass, detail,
         sw.seconds());
}

TEST_CASE("criterion 9: property suites") {
  Stopwatch sw;
  bool pass = true;
  std::string detail;
  auto mark = [&](const char* name, bool ok) {
    if (!ok) pass = false;
    detail += std::string(detail.empty() ? "" : ", ") + name +
              (ok ? ":ok" : ":FAIL");
  };

  {  // Hermiticity of the static Hamiltonian
    Rng rng(1);
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
      const Eigen::Matrix3d h = build_hst(
          {10 * rng.uniform(), 10 * rng.uniform(), 20 * (rng.uniform() - 0.5)});
      ok = ok && (h - h.transpose()).norm() == 0.0;
    }
    mark("hermiticity", ok);
  }
  {  // dipole trace
    Rng rng(2);
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const EigenSystem sys = eigensystem({10 * rng.uniform() + 0.1,
                                           10 * rng.uniform() + 0.1,
                                           40 * (rng.uniform() - 0.5)});
      ok = ok && std::abs(sys.dipole.trace() + 1.0) < 1e-12 &&
           (sys.dipole - sys.dipole.adjoint()).norm() < 1e-12;
    }
    mark("dipole_trace", ok);
  }
  {  // Hellmann-Feynman vs finite difference
    Rng rng(3);
    bool ok = true;
    int checked = 0;
    while (checked < 200) {
      DeviceParams p{8 * rng.uniform() + 0.5, 8 * rng.uniform() + 0.5,
                     ghz_to_rad_ns(30 * (rng.uniform() - 0.5))};
      const EigenSystem sys = eigensystem(p);
      if (sys.near_degenerate || sys.qubit_energy() < 0.05 ||
          sys.ef_energy() < 0.05)
        continue;
      const double h = 1e-5 * std::max(p.delta_b, p.tau);
      DeviceParams lo = p, hi = p;
      lo.epsilon -= h;
      hi.epsilon += h;
      const double fd = (qubit_energy(hi) - qubit_energy(lo)) / (2 * h);
      const double an = qubit_energy_derivative(p);
      ok = ok && std::abs(an - fd) <= 1e-5 * std::abs(fd) + 1e-7;
      ++checked;
    }
    mark("hellmann_feynman", ok);
  }
  {  // catalog sequences against their closed-form targets
    bool ok = true;
    for (const auto& [gate, families] : clifford_catalog()) {
      for (const auto& [fam, seq] : families)
        ok = ok && phase_stripped_distance(seq.target_unitary(),
                                           sequence_unitary(seq)) < 1e-9;
    }
    mark("sequence_targets", ok);
  }
  {  // stitching split-invariance
    Rng rng(4);
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
      PulseSequence seq;
      const int ns = 1 + static_cast<int>(rng.uniform() * 3);
      for (int k = 0; k < ns; ++k)
        seq.segments.push_back(
            {rng.uniform(-kPi, kPi), rng.uniform(0.3, kTwoPi), 1.0});
      PulseSequence split = seq;
      const std::size_t k =
          static_cast<std::size_t>(rng.uniform() * seq.segments.size());
      const double f = rng.uniform(0.1, 0.9);
      split.segments.clear();
      for (std::size_t j = 0; j < seq.segments.size(); ++j) {
        if (j == k) {
          PulseSegment a = seq.segments[j], b = seq.segments[j];
          a.theta *= f;
          b.theta *= 1.0 - f;
          split.segments.push_back(a);
          split.segments.push_back(b);
        } else {
          split.segments.push_back(seq.segments[j]);
        }
      }
      const double w = rng.uniform(0.02, 4.0);
      ok = ok &&
           (control_matrix(seq, w) - control_matrix(split, w)).norm() < 1e-10;
    }
    mark("stitching_split", ok);
  }
  {  // Lindblad trace preservation
    const EigenSystem sys = eigensystem(set_a());
    CavityConfig c;
    c.omega_r = sys.qubit_energy();
    c.g1 = c.g2 = ghz_to_rad_ns(0.1);
    c.gamma_a = ghz_to_rad_ns(2.8e-5);
    c.max_excitation = 2;
    const HybridOps ops = effective_hamiltonian(c, sys, sys);
    const EntanglerSpec spec = entangler_spec(ops.omega_ge[0], ops.omega_ge[1]);
    Eigen::MatrixXcd rho0 =
        Eigen::MatrixXcd::Zero(ops.space.dim(), ops.space.dim());
    rho0(ops.space.find(1, 1, 0), ops.space.find(1, 1, 0)) = 0.5;
    rho0(ops.space.find(0, 1, 0), ops.space.find(0, 1, 0)) = 0.5;
    const LindbladResult res =
        evolve_lindblad(ops, c, ops.h0, rho0, 2.0 * spec.duration, 32);
    mark("lindblad_trace",
         res.max_trace_error < 1e-9 && res.min_eigenvalue > -1e-7);
  }
  report(9, "independent property suites", pass, detail, sw.seconds());
}
