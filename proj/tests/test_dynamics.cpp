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

#include <catch2/catch_amalgamated.hpp>

#include "stq/dynamics.hpp"
#include "stq/filter.hpp"

using namespace stq;

namespace {

DeviceParams tss_params() {
  const double db = ghz_to_rad_ns(2.5), tau = ghz_to_rad_ns(1.5);
  return {db, tau, find_tss(db, tau)};
}

constexpr double kEpsAc = kTwoPi * 0.1;  // rad/ns

SpectralModel mc_model(double omega0) {
  SpectralModel m;
  m.alpha = 1.0;
  m.t0 = 1.0 / omega0;
  m.omega_ir = ghz_to_rad_ns(1e-4);
  m.omega_uv = ghz_to_rad_ns(20.0);
  m.amplitude_a = 1e-3 / m.t0;
  return m;
}

}  // namespace

TEST_CASE("h_rot structure") {
  const RotatingFrameModel model = make_resonant_model(tss_params(), kEpsAc);
  SECTION("no drive leaves only the level shifts") {
    RotatingFrameModel off = model;
    off.eps_ac = 0.0;
    const Eigen::Matrix3cd h = h_rot(off, 0.0, 1.7, {0.1, 0.2, 0.3});
    REQUIRE(std::abs(h(0, 0) - 0.1) < 1e-15);
    REQUIRE(std::abs(h(1, 1) - 0.2) < 1e-15);
    REQUIRE(std::abs(h(2, 2) - 0.3) < 1e-15);
    REQUIRE(std::abs(h(0, 1)) < 1e-15);
    REQUIRE(std::abs(h(1, 2)) < 1e-15);
  }
  SECTION("rwa reduces to the resonant two-level block") {
    RotatingFrameModel rwa = model;
    rwa.rwa = true;
    const double phi = 0.6, dq = 0.02;
    const Eigen::Matrix3cd h = h_rot(rwa, phi, 3.3, {0.0, dq, 0.0});
    const double om = model.omega0();
    REQUIRE(std::abs(h(1, 0) - 0.5 * om * std::polar(1.0, -phi)) < 1e-12);
    REQUIRE(std::abs(h(1, 1) - 0.5 * dq) < 1e-15);
    REQUIRE(std::abs(h(0, 0) + 0.5 * dq) < 1e-15);
    REQUIRE(std::abs(h(2, 2)) < 1e-15);
    REQUIRE(std::abs(h(0, 2)) + std::abs(h(1, 2)) < 1e-15);
  }
  SECTION("t = 0 off-diagonals carry the bare dipole pattern") {
    const Eigen::Matrix3cd h = h_rot(model, 0.0, 0.0);
    // eps'(0) = eps_ac, so (m,n) = eps_ac * d_mn
    const Eigen::Matrix3cd d = model.eigen.dipole;
    REQUIRE(std::abs(h(1, 2) - kEpsAc * d(1, 2)) < 1e-12);
    REQUIRE(std::abs(h(0, 2) - kEpsAc * d(0, 2)) < 1e-12);
    REQUIRE((h - h.adjoint()).norm() < 1e-12);
  }
  SECTION("Hermitian at arbitrary times") {
    for (double t : {0.37, 2.9, 17.4}) {
      const Eigen::Matrix3cd h = h_rot(model, 1.1, t, {0.01, -0.02, 0.03});
      REQUIRE((h - h.adjoint()).norm() < 1e-12);
    }
  }
}

TEST_CASE("propagate") {
  const RotatingFrameModel model = make_resonant_model(tss_params(), kEpsAc);
  SECTION("zero drive keeps any diagonal state fixed") {
    RotatingFrameModel off = model;
    off.eps_ac = 1e-300;  // omega0 > 0 needed for durations; keep it tiny
    PulseSequence seq = naive_sequence({{0.0, 0.01}}, {1, 0, 0}, 0.01);
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(0, 0) = 0.25;
    rho0(1, 1) = 0.5;
    rho0(2, 2) = 0.25;
    const PropagationResult res = propagate(off, seq, rho0, 1e-4);
    REQUIRE((res.rho_final - rho0).norm() < 1e-12);
  }
  SECTION("trace and Hermiticity preserved through a pi pulse") {
    PulseSequence seq = naive_sequence({{0.0, kPi}}, {1, 0, 0}, kPi);
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(1, 1) = 1.0;
    const PropagationResult res = propagate(model, seq, rho0);
    REQUIRE(std::abs(res.rho_final.trace().real() - 1.0) < 1e-9);
    REQUIRE((res.rho_final - res.rho_final.adjoint()).norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(res.rho_final);
    REQUIRE(es.eigenvalues()(0) > -1e-9);
  }
  SECTION("leakage stays at the 1e-4 scale on the NOT gate") {
    PulseSequence seq = naive_sequence({{0.0, kPi}}, {1, 0, 0}, kPi);
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(1, 1) = 1.0;  // |0> = |e>
    const PropagationResult res = propagate(model, seq, rho0);
    REQUIRE(res.max_pf > 1e-5);
    REQUIRE(res.max_pf < 1e-3);
    REQUIRE(std::real(res.rho_final(1, 1)) < 1e-5);   // P0 after NOT
    REQUIRE(std::real(res.rho_final(0, 0)) > 0.999);  // P1 after NOT
  }
  SECTION("dt refinement is second order") {
    PulseSequence seq = naive_sequence({{0.0, 0.5 * kPi}}, {1, 0, 0},
                                       0.5 * kPi);
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(1, 1) = 1.0;
    const double dt0 = default_dt(model) * 4.0;
    const auto p1 = propagate(model, seq, rho0, dt0).rho_final(0, 0);
    const auto p2 = propagate(model, seq, rho0, dt0 / 2).rho_final(0, 0);
    const auto p4 = propagate(model, seq, rho0, dt0 / 4).rho_final(0, 0);
    const double e1 = std::abs(p1 - p4), e2 = std::abs(p2 - p4);
    // Richardson ratio ~ (4 - 1) x for a 2nd-order stepper
    REQUIRE(e1 / e2 > 2.5);
    // and the default step is already converged
    const auto pd = propagate(model, seq, rho0).rho_final(0, 0);
    const auto ph = propagate(model, seq, rho0, default_dt(model) / 2)
                        .rho_final(0, 0);
    REQUIRE(std::abs(pd - ph) < 1e-8);
  }
  SECTION("rwa matches the full model for every catalog gate") {
    // the exact model picks up micromotion kicks at segment phase jumps,
    // so the deviation grows with segment count; the composite pulses are
    // bounded separately (worst observed: 3.6e-3 for the 68 ns z gate)
    const auto cat = clifford_catalog(model.omega0());
    for (const auto& [gate, families] : cat) {
      for (const auto& [fam, seq] : families) {
        INFO(gate << " / " << family_name(fam));
        const Eigen::Matrix3cd u3 = propagate_unitary(model, seq);
        const double f = block_trace_fidelity(sequence_unitary(seq), u3);
        REQUIRE(1.0 - f <= (fam == GateFamily::corpse ? 5e-3 : 1e-3));
      }
    }
  }
  SECTION("trajectory reproducibility with noise injection") {
    SpectralModel m = mc_model(model.omega0());
    const NoiseSynth synth(m, 99);
    PulseSequence seq = naive_sequence({{0.0, kPi}}, {1, 0, 0}, kPi);
    Eigen::Matrix3cd rho0 = Eigen::Matrix3cd::Zero();
    rho0(1, 1) = 1.0;
    const auto a = propagate(model, seq, rho0, 0.0, &synth);
    const auto b = propagate(model, seq, rho0, 0.0, &synth);
    REQUIRE((a.rho_final - b.rho_final).norm() == 0.0);
  }
}

TEST_CASE("monte_carlo_fidelity") {
  const auto cat = clifford_catalog();
  SECTION("zero amplitude noise returns exactly 1") {
    SpectralModel m = mc_model(1.0);
    m.amplitude_a = 0.0;
    const McReport rep =
        monte_carlo_fidelity(cat.at("x_pi2").at(GateFamily::naive), m, 16, 7);
    REQUIRE(rep.mean == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(rep.stderr_ < 1e-12);
  }
  SECTION("quasi-static corpse scaling: quartic in sigma") {
    const PulseSequence& seq = cat.at("x_pi2").at(GateFamily::corpse);
    std::vector<double> sig, infid;
    for (double s : {0.01, 0.02, 0.04, 0.07, 0.1}) {
      const McReport rep =
          monte_carlo_fidelity_quasistatic(seq, s, 4000, 1234);
      sig.push_back(s);
      infid.push_back(1.0 - rep.mean);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      sx += std::log(sig[i]);
      sy += std::log(infid[i]);
      sxx += std::log(sig[i]) * std::log(sig[i]);
      sxy += std::log(sig[i]) * std::log(infid[i]);
    }
    const double n = static_cast<double>(sig.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    REQUIRE(slope == Catch::Approx(4.0).margin(0.3));
    // Gaussian moment oracle: <delta^4> = 3 sigma^4 against the quartic
    // closed form
    const double c4 =
        (1.0 - quasistatic_fidelity(GateFamily::corpse, 0.5 * kPi, 0.1)) /
        std::pow(0.1, 4);
    const McReport rep =
        monte_carlo_fidelity_quasistatic(seq, 0.05, 20000, 4321);
    const double expect = 3.0 * c4 * std::pow(0.05, 4);
    REQUIRE(1.0 - rep.mean ==
            Catch::Approx(expect).margin(5.0 * rep.stderr_ + 0.1 * expect));
  }
  SECTION("one-over-f ensemble agrees with the spectral route") {
    const PulseSequence& seq = cat.at("x_pi2").at(GateFamily::naive);
    const SpectralModel m = mc_model(1.0);
    const double predicted = fidelity_from_spectrum(seq, m);
    const McReport rep = monte_carlo_fidelity(seq, m, 300, 2024);
    REQUIRE(std::abs(rep.mean - predicted) <= 3.0 * rep.stderr_);
  }
}
