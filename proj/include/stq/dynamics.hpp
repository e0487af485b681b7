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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "stq/hamiltonian.hpp"
#include "stq/noise.hpp"
#include "stq/parallel.hpp"
#include "stq/pulses.hpp"
#include "stq/units.hpp"

namespace stq {

/// Resonantly driven 3-level system in the frame rotating with the bare
/// eigenenergies. Basis order (|g>, |e>, |f>); the computational states
/// are |0> = |e>, |1> = |g>.
struct RotatingFrameModel {
  EigenSystem eigen;
  double eps_ac = 0.0;
  double omega = 0.0;  // carrier; resonance means omega = omega_q
  bool rwa = false;

  double omega0() const { return std::abs(eigen.d_ge()) * eps_ac; }
  // Drive phase is calibrated so a segment phase phi rotates the qubit
  // about the axis phi regardless of the sign convention of d_ge.
  double drive_phase_offset() const { return std::arg(eigen.d_ge()); }
};

inline RotatingFrameModel make_resonant_model(const DeviceParams& params,
                                              double eps_ac, bool rwa = false) {
  RotatingFrameModel m;
  m.eigen = eigensystem(params);
  m.eps_ac = eps_ac;
  m.omega = m.eigen.qubit_energy();
  m.rwa = rwa;
  return m;
}

/// H_rot(t) for drive phase law value phi and level shifts dE_n:
///   off-diagonal (m,n):  eps'(t) d_mn e^{i(E_m - E_n) t}
///   diagonal (n,n):      eps'(t) d_nn + dE_n
/// with eps'(t) = eps_ac cos(omega t + phi - offset). With rwa the
/// resonant 2x2 block (Omega0/2)(cos phi sx + sin phi sy) plus
/// (dE_e - dE_g)/2 sz is embedded and |f> is decoupled.
inline Eigen::Matrix3cd h_rot(const RotatingFrameModel& model, double phi,
                              double t,
                              const Eigen::Vector3d& level_shifts =
                                  Eigen::Vector3d::Zero()) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  if (model.rwa) {
    const double om = model.omega0();
    const double dz = 0.5 * (level_shifts(1) - level_shifts(0));
    h(1, 1) = dz;
    h(0, 0) = -dz;
    h(1, 0) = 0.5 * om * std::polar(1.0, -phi);  // <e|H|g>
    h(0, 1) = std::conj(h(1, 0));
    return h;
  }
  const double phi_drive = phi - model.drive_phase_offset();
  const double eps = model.eps_ac * std::cos(model.omega * t + phi_drive);
  const Eigen::Vector3d& en = model.eigen.energies;
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      if (m == n) {
        h(m, m) = eps * model.eigen.dipole(m, m) + level_shifts(m);
      } else {
        h(m, n) = eps * model.eigen.dipole(m, n) *
                  std::polar(1.0, (en(m) - en(n)) * t);
      }
    }
  }
  return h;
}

/// Step one dt with the midpoint-sampled Hamiltonian: rho -> U rho U',
/// U = exp(-i H dt) via the self-adjoint eigendecomposition.
inline void lvn_step(Eigen::Matrix3cd& rho, const Eigen::Matrix3cd& h,
                     double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
  Eigen::Vector3cd phases;
  for (int i = 0; i < 3; ++i)
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
  const Eigen::Matrix3cd u =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  rho = u * rho * u.adjoint();
}

struct PopulationSample {
  double t = 0.0;
  double p0 = 0.0;  // |0> = |e>
  double p1 = 0.0;  // |1> = |g>
  double pf = 0.0;
};

struct PropagationResult {
  Eigen::Matrix3cd rho_final;
  std::vector<PopulationSample> trajectory;
  double max_pf = 0.0;
};

/// Step for the fastest phase in H_rot (carrier plus the g-f splitting).
/// The divisor is sized so that halving the default changes final
/// populations by < 1e-8 at the reference device parameters.
inline double default_dt(const RotatingFrameModel& model) {
  const double w_max = model.omega + (model.eigen.energies(2) -
                                      model.eigen.energies(0)) + model.omega;
  return kTwoPi / w_max / 320.0;
}

/// von Neumann propagation of the (possibly noisy) rotating-frame model
/// through a pulse sequence. Noise enters as level shifts
/// dE_n(t) = d_nn * d_eps(t). Trace and positivity are preserved by
/// construction (each step is unitary).
inline PropagationResult propagate(const RotatingFrameModel& model,
                                   const PulseSequence& seq,
                                   const Eigen::Matrix3cd& rho0, double dt = 0.0,
                                   const NoiseSynth* eps_noise = nullptr,
                                   int sample_stride = 8) {
  if (dt <= 0.0) dt = default_dt(model);
  const double om0 = model.omega0();
  PropagationResult res;
  Eigen::Matrix3cd rho = rho0;
  double t = 0.0;
  auto record = [&](double tt) {
    res.trajectory.push_back({tt, std::real(rho(1, 1)), std::real(rho(0, 0)),
                              std::real(rho(2, 2))});
  };
  record(0.0);
  for (const auto& seg : seq.segments) {
    const double T = seg.theta / om0;  // physical duration at this drive
    if (T <= 0.0) continue;
    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt));
    const double h = T / static_cast<double>(n_steps);
    std::vector<double> deps;
    if (eps_noise) deps = eps_noise->sample(t, h, n_steps, 0.5);
    for (std::size_t i = 0; i < n_steps; ++i) {
      const double tm = t + (static_cast<double>(i) + 0.5) * h;
      Eigen::Vector3d shifts = Eigen::Vector3d::Zero();
      if (eps_noise) {
        for (int nlev = 0; nlev < 3; ++nlev)
          shifts(nlev) = std::real(model.eigen.dipole(nlev, nlev)) * deps[i];
      }
      lvn_step(rho, h_rot(model, seg.phi, tm, shifts), h);
      res.max_pf = std::max(res.max_pf, std::real(rho(2, 2)));
      if ((i + 1) % static_cast<std::size_t>(sample_stride) == 0 ||
          i + 1 == n_steps)
        record(t + static_cast<double>(i + 1) * h);
    }
    t += T;
  }
  res.rho_final = rho;
  return res;
}

/// Fidelity of a 3-level trajectory against the two-level target of the
/// sequence: the computational block (|0>, |1>) = (|e>, |g>) of the final
/// unitary is compared with trace fidelity; leakage shrinks the block.
inline double block_trace_fidelity(const Matrix2cd& target,
                                   const Eigen::Matrix3cd& u3) {
  Matrix2cd block;
  block << u3(1, 1), u3(1, 0), u3(0, 1), u3(0, 0);
  return 0.5 * std::abs((target.adjoint() * block).trace());
}

/// Unitary propagation of the 3-level model (state-vector form), used for
/// gate-fidelity checks where no noise average is involved.
inline Eigen::Matrix3cd propagate_unitary(const RotatingFrameModel& model,
                                          const PulseSequence& seq,
                                          double dt = 0.0) {
  if (dt <= 0.0) dt = default_dt(model);
  const double om0 = model.omega0();
  Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
  double t = 0.0;
  for (const auto& seg : seq.segments) {
    const double T = seg.theta / om0;
    if (T <= 0.0) continue;
    const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt));
    const double h = T / static_cast<double>(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
      const double tm = t + (static_cast<double>(i) + 0.5) * h;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
          h_rot(model, seg.phi, tm));
      Eigen::Vector3cd ph;
      for (int k = 0; k < 3; ++k)
        ph(k) = std::polar(1.0, -es.eigenvalues()(k) * h);
      u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * u;
    }
    t += T;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Two-level Monte Carlo under time-dependent dephasing noise.
// ---------------------------------------------------------------------------

enum class FidelityMetric { trace, average };

struct McReport {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline Matrix2cd pauli_exp(double ax, double ay, double az, double dt) {
  const double rx = ax * dt, ry = ay * dt, rz = az * dt;
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  if (r < 1e-300) return Matrix2cd::Identity();
  const double c = std::cos(r), s = std::sin(r) / r;
  Matrix2cd u;
  u << complexd(c, -s * rz), complexd(-s * ry, -s * rx),
       complexd(s * ry, -s * rx), complexd(c, s * rz);
  return u;
}

inline McReport summarize(const std::vector<double>& fids, std::uint64_t seed) {
  McReport rep;
  rep.n = fids.size();
  rep.seed = seed;
  double sum = 0.0;
  for (double f : fids) sum += f;
  rep.mean = sum / static_cast<double>(fids.size());
  double var = 0.0;
  for (double f : fids) var += (f - rep.mean) * (f - rep.mean);
  var /= static_cast<double>(fids.size() - 1);
  rep.stderr_ = std::sqrt(var / static_cast<double>(fids.size()));
  return rep;
}

}  // namespace detail

/// Time-domain Monte Carlo of a pulse sequence under noise traces drawn
/// from the spectral model. The noise couples as delta(t) * sigma_z with
/// unit coefficient, which is the convention under which the first-order
/// average infidelity equals the one-sided filter-function integral of
/// fidelity_from_spectrum; the trace metric completes that pairing.
inline McReport monte_carlo_fidelity(const PulseSequence& seq,
                                     const SpectralModel& model,
                                     std::size_t n_realizations,
                                     std::uint64_t base_seed,
                                     FidelityMetric metric = FidelityMetric::trace,
                                     double sigma_z_coupling = 1.0,
                                     int threads = 0) {
  if (n_realizations < 2)
    throw config_error("monte_carlo_fidelity: need n_realizations >= 2");
  model.validate();
  const Matrix2cd target = seq.target_unitary();
  const double dt = 0.5 * kPi / model.omega_uv;
  std::vector<double> fids(n_realizations, 0.0);
  parallel_for(
      n_realizations,
      [&](std::size_t r) {
        NoiseSynth synth(model, mix_seed(base_seed, r));
        Matrix2cd u = Matrix2cd::Identity();
        double t = 0.0;
        for (const auto& seg : seq.segments) {
          const double T = seg.duration();
          if (T <= 0.0) continue;
          const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt));
          const double h = T / static_cast<double>(n_steps);
          const double ax = 0.5 * seg.omega0 * std::cos(seg.phi);
          const double ay = 0.5 * seg.omega0 * std::sin(seg.phi);
          const std::vector<double> dl = synth.sample(t, h, n_steps, 0.5);
          for (std::size_t i = 0; i < n_steps; ++i)
            u = detail::pauli_exp(ax, ay, sigma_z_coupling * dl[i], h) * u;
          t += T;
        }
        fids[r] = metric == FidelityMetric::trace
                      ? trace_fidelity(target, u)
                      : average_gate_fidelity(target, u);
      },
      threads);
  return detail::summarize(fids, base_seed);
}

/// Quasi-static Monte Carlo: one Gaussian sz offset per realization,
/// propagated in closed form.
inline McReport monte_carlo_fidelity_quasistatic(
    const PulseSequence& seq, double sigma, std::size_t n_realizations,
    std::uint64_t base_seed, FidelityMetric metric = FidelityMetric::trace,
    int threads = 0) {
  if (n_realizations < 2)
    throw config_error("monte_carlo_fidelity_quasistatic: need n >= 2");
  const Matrix2cd target = seq.target_unitary();
  std::vector<double> fids(n_realizations, 0.0);
  parallel_for(
      n_realizations,
      [&](std::size_t r) {
        const double delta = quasistatic_draw(sigma, mix_seed(base_seed, r));
        const Matrix2cd u = sequence_unitary(seq, delta);
        fids[r] = metric == FidelityMetric::trace
                      ? trace_fidelity(target, u)
                      : average_gate_fidelity(target, u);
      },
      threads);
  return detail::summarize(fids, base_seed);
}

}  // namespace stq
