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
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stq/hamiltonian.hpp"
#include "stq/parallel.hpp"
#include "stq/pulses.hpp"
#include "stq/rng.hpp"
#include "stq/units.hpp"

namespace stq {

enum class TwoQubitMetric { state_transfer, block_agf_d2, process_agf_d4 };

inline TwoQubitMetric metric_from_name(const std::string& s) {
  if (s == "state_transfer") return TwoQubitMetric::state_transfer;
  if (s == "block_agf_d2") return TwoQubitMetric::block_agf_d2;
  if (s == "process_agf_d4") return TwoQubitMetric::process_agf_d4;
  throw config_error("unknown two-qubit metric: " + s);
}

struct CavityConfig {
  double omega_r = 0.0;   // rad/ns
  double g1 = 0.0;        // rad/ns
  double g2 = 0.0;
  double gamma_a = 0.0;   // photon decay
  double gamma_1 = 0.0;   // qubit relaxation (default off; T1 is huge)
  double gamma_2 = 0.0;   // pure dephasing (default off; noise is explicit)
  int n_max = 2;          // Fock states 0..n_max
  int qubit_levels = 2;   // 2 (g,e) or 3 (g,e,f)
  // Per-qubit excited-level shift applied per noise draw is
  // noise_scale * delta_k with delta_k ~ N(0, sigma). The default is
  // calibrated against the reference fidelity-vs-noise sweep; 1.0 applies
  // the draw as the full qubit-splitting shift.
  double noise_scale = 0.44;
  bool correlated_noise = false;
  int max_excitation = -1;  // <0: uncapped

  void validate() const {
    if (omega_r <= 0.0) throw config_error("CavityConfig: omega_r must be > 0");
    if (gamma_a < 0.0 || gamma_1 < 0.0 || gamma_2 < 0.0)
      throw config_error("CavityConfig: rates must be >= 0");
    if (n_max < 2) throw config_error("CavityConfig: n_max must be >= 2");
    if (qubit_levels != 2 && qubit_levels != 3)
      throw config_error("CavityConfig: qubit_levels must be 2 or 3");
  }
};

struct EntanglerSpec {
  double xi = 0.0;        // tan(xi/2) = -Omega1/Omega2
  double omega_eff = 0.0; // sqrt(Omega1^2 + Omega2^2)
  double duration = 0.0;  // Integral Omega dt = pi
};

inline EntanglerSpec entangler_spec(double omega1, double omega2) {
  EntanglerSpec spec;
  spec.xi = 2.0 * std::atan2(-omega1, omega2);
  spec.omega_eff = std::hypot(omega1, omega2);
  if (spec.omega_eff <= 0.0)
    throw config_error("entangler_spec: zero effective coupling");
  spec.duration = kPi / spec.omega_eff;
  return spec;
}

/// Eq.-structure entangler on {|gg0>, |ge0>, |eg0>, |ee0>}.
inline Eigen::Matrix4cd entangler_unitary(double xi) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = std::cos(xi);
  u(1, 2) = std::sin(xi);
  u(2, 1) = std::sin(xi);
  u(2, 2) = -std::cos(xi);
  u(3, 3) = -1.0;
  return u;
}

// ---------------------------------------------------------------------------
// Hybrid space (qubit x qubit x Fock), optionally restricted to a total
// excitation cap (g=0, e=1, f=2, photon=1 each). The coupling conserves the
// count and photon decay lowers it, so a cap that covers the initial states
// is an exact restriction, not an approximation.
// ---------------------------------------------------------------------------

struct HybridSpace {
  int qdim = 2;
  int nph = 3;  // photon states 0..n_max
  std::vector<std::array<int, 3>> basis;  // (q1, q2, n)

  static HybridSpace build(int qubit_levels, int n_max, int max_excitation) {
    HybridSpace sp;
    sp.qdim = qubit_levels;
    sp.nph = n_max + 1;
    for (int q1 = 0; q1 < sp.qdim; ++q1)
      for (int q2 = 0; q2 < sp.qdim; ++q2)
        for (int n = 0; n < sp.nph; ++n)
          if (max_excitation < 0 || q1 + q2 + n <= max_excitation)
            sp.basis.push_back({q1, q2, n});
    return sp;
  }

  int dim() const { return static_cast<int>(basis.size()); }

  int find(int q1, int q2, int n) const {
    for (int i = 0; i < dim(); ++i)
      if (basis[i][0] == q1 && basis[i][1] == q2 && basis[i][2] == n) return i;
    return -1;
  }
};

struct HybridOps {
  HybridSpace space;
  Eigen::MatrixXcd h0;               // couplings + static detunings
  Eigen::MatrixXcd a;                // photon annihilation
  std::array<Eigen::MatrixXcd, 2> e_proj;   // |e><e| per qubit
  std::array<Eigen::MatrixXcd, 2> sigma_ge; // |g><e| per qubit
  std::array<double, 2> omega_ge{};  // g_k d_ge^(k)
  double rwa_margin = 0.0;           // min |E_m - E_n - w_r| / |g d_mn|
};

/// Rotating-frame hybrid Hamiltonian: resonant exchange legs
/// Omega_k (sigma_ge^k a' + h.c.), static e-level detunings
/// (omega_q^k - omega_r), and for 3-level qubits the f legs
/// g_k d_ef (sigma_ef^k a' + h.c.) with detuning (omega_gf^k - 2 omega_r)
/// on |f>. Longitudinal d_nn terms and counter-rotating pieces oscillate
/// at >= omega_r and are dropped; rwa_margin records how safely.
inline HybridOps effective_hamiltonian(const CavityConfig& config,
                                       const EigenSystem& eigen1,
                                       const EigenSystem& eigen2) {
  config.validate();
  HybridOps ops;
  ops.space = HybridSpace::build(config.qubit_levels, config.n_max,
                                 config.max_excitation);
  const int dim = ops.space.dim();
  ops.h0 = Eigen::MatrixXcd::Zero(dim, dim);
  ops.a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < 2; ++k) {
    ops.e_proj[k] = Eigen::MatrixXcd::Zero(dim, dim);
    ops.sigma_ge[k] = Eigen::MatrixXcd::Zero(dim, dim);
  }
  const std::array<const EigenSystem*, 2> eig = {&eigen1, &eigen2};
  const std::array<double, 2> g = {config.g1, config.g2};

  ops.rwa_margin = 1e30;
  for (int k = 0; k < 2; ++k) {
    ops.omega_ge[k] = g[k] * std::abs(eig[k]->d_ge());
    if (g[k] <= 0.0) continue;
    // margins of the dropped terms: longitudinal pieces oscillate at
    // omega_r; the g-f leg is detuned by |omega_gf - omega_r|; the e-f leg
    // is dropped (and hence scored) only in the 2-level reduction
    for (int m = 0; m < 3; ++m) {
      const double dmm = std::abs(eig[k]->dipole(m, m));
      if (dmm > 1e-12)
        ops.rwa_margin =
            std::min(ops.rwa_margin, config.omega_r / (g[k] * dmm));
    }
    if (std::abs(eig[k]->d_gf()) > 1e-12) {
      const double det = std::abs(eig[k]->energies(2) - eig[k]->energies(0) -
                                  config.omega_r);
      ops.rwa_margin =
          std::min(ops.rwa_margin, det / (g[k] * std::abs(eig[k]->d_gf())));
    }
    if (config.qubit_levels == 2 && std::abs(eig[k]->d_ef()) > 1e-12) {
      const double det = std::abs(eig[k]->energies(2) - eig[k]->energies(1) -
                                  config.omega_r);
      ops.rwa_margin =
          std::min(ops.rwa_margin, det / (g[k] * std::abs(eig[k]->d_ef())));
    }
  }

  for (int i = 0; i < dim; ++i) {
    const auto [q1, q2, n] = ops.space.basis[i];
    const std::array<int, 2> q = {q1, q2};
    // photon lowering
    if (n >= 1) {
      const int j = ops.space.find(q1, q2, n - 1);
      if (j >= 0) ops.a(j, i) = std::sqrt(static_cast<double>(n));
    }
    for (int k = 0; k < 2; ++k) {
      auto find_q = [&](int qk, int nn) {
        return k == 0 ? ops.space.find(qk, q2, nn) : ops.space.find(q1, qk, nn);
      };
      if (q[k] == 1) {
        ops.e_proj[k](i, i) = 1.0;
        // e-level static detuning from resonance
        ops.h0(i, i) += eig[k]->qubit_energy() - config.omega_r;
        // sigma_ge a' : |e, n> -> |g, n+1>
        if (n + 1 < ops.space.nph) {
          const int j = find_q(0, n + 1);
          if (j >= 0) {
            const double amp = ops.omega_ge[k] * std::sqrt(n + 1.0);
            ops.h0(j, i) += amp;
            ops.h0(i, j) += amp;
          }
        }
        const int j = find_q(0, n);
        if (j >= 0) ops.sigma_ge[k](j, i) = 1.0;
      }
      if (q[k] == 2) {
        // f detuning in the frame where e sits omega_r above g
        ops.h0(i, i) += eig[k]->energies(2) - eig[k]->energies(0) -
                        2.0 * config.omega_r;
        // sigma_ef a' : |f, n> -> |e, n+1>
        if (n + 1 < ops.space.nph) {
          const int j = find_q(1, n + 1);
          if (j >= 0) {
            const double amp =
                g[k] * std::abs(eig[k]->d_ef()) * std::sqrt(n + 1.0);
            ops.h0(j, i) += amp;
            ops.h0(i, j) += amp;
          }
        }
      }
    }
  }
  return ops;
}

/// Quasi-static per-qubit detunings for one realization.
struct NoiseDraw {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

inline NoiseDraw draw_noise(double sigma, std::uint64_t seed, bool correlated) {
  Rng rng(seed);
  NoiseDraw d;
  d.delta1 = sigma * rng.gaussian();
  d.delta2 = correlated ? d.delta1 : sigma * rng.gaussian();
  return d;
}

inline Eigen::MatrixXcd noisy_hamiltonian(const HybridOps& ops,
                                          const CavityConfig& config,
                                          const NoiseDraw& draw) {
  return ops.h0 + config.noise_scale * (draw.delta1 * ops.e_proj[0] +
                                        draw.delta2 * ops.e_proj[1]);
}

// ---------------------------------------------------------------------------
// Lindblad evolution via the vectorized generator.
// ---------------------------------------------------------------------------

inline Eigen::MatrixXcd liouvillian(const Eigen::MatrixXcd& h,
                                    const HybridOps& ops,
                                    const CavityConfig& config) {
  const int d = static_cast<int>(h.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  auto kron = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const std::complex<double> mi(0.0, -1.0);
  Eigen::MatrixXcd lv = mi * (kron(id, h) - kron(h.transpose(), id));
  auto add_dissipator = [&](const Eigen::MatrixXcd& l, double rate) {
    if (rate <= 0.0) return;
    const Eigen::MatrixXcd ll = l.adjoint() * l;
    lv += rate * (kron(l.conjugate(), l) -
                  0.5 * (kron(id, ll) + kron(ll.transpose(), id)));
  };
  add_dissipator(ops.a, config.gamma_a);
  for (int k = 0; k < 2; ++k) {
    add_dissipator(ops.sigma_ge[k], config.gamma_1);
    add_dissipator(2.0 * ops.e_proj[k] -
                       Eigen::MatrixXcd::Identity(d, d),
                   config.gamma_2);
  }
  return lv;
}

struct LindbladResult {
  Eigen::MatrixXcd rho_final;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> populations;  // diagonal at each sample
  double min_eigenvalue = 0.0;
  double max_trace_error = 0.0;
};

/// Trace-preserving CP evolution of rho0 for t_final, sampled n_samples
/// times. The generator is time-independent, so each step applies
/// exp(L dt) exactly. Positivity below -1e-7 aborts.
inline LindbladResult evolve_lindblad(const HybridOps& ops,
                                      const CavityConfig& config,
                                      const Eigen::MatrixXcd& h,
                                      const Eigen::MatrixXcd& rho0,
                                      double t_final, int n_samples = 64) {
  const int d = static_cast<int>(h.rows());
  const Eigen::MatrixXcd lv = liouvillian(h, ops, config);
  const double dt = t_final / n_samples;
  const Eigen::MatrixXcd u_dt = (lv * dt).exp();
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  LindbladResult res;
  res.min_eigenvalue = 0.0;
  auto record = [&](double t) {
    const Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
    res.times.push_back(t);
    res.populations.push_back(rho.diagonal().real());
    res.max_trace_error =
        std::max(res.max_trace_error, std::abs(rho.trace().real() - 1.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (rho + rho.adjoint()));
    res.min_eigenvalue = std::min(res.min_eigenvalue, es.eigenvalues()(0));
    if (res.min_eigenvalue < -1e-7)
      throw numerical_error("evolve_lindblad: positivity violated");
  };
  record(0.0);
  for (int i = 0; i < n_samples; ++i) {
    v = u_dt * v;
    record((i + 1) * dt);
  }
  res.rho_final = Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
  return res;
}

// ---------------------------------------------------------------------------
// Fidelity metrics for the entangling gate
// ---------------------------------------------------------------------------

namespace detail {

/// exp(L T) applied to initial density matrices; one generator
/// exponential, many inputs.
class ChannelAction {
 public:
  ChannelAction(const HybridOps& ops, const CavityConfig& config,
                const Eigen::MatrixXcd& h, double t_final)
      : dim_(static_cast<int>(h.rows())),
        propagator_((liouvillian(h, ops, config) * t_final).exp()) {}

  int dim() const { return dim_; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho0) const {
    Eigen::VectorXcd v =
        Eigen::Map<const Eigen::VectorXcd>(rho0.data(), dim_ * dim_);
    v = propagator_ * v;
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim_, dim_);
  }

 private:
  int dim_;
  Eigen::MatrixXcd propagator_;
};

/// Average gate fidelity of the channel restricted to the block spanned by
/// `idx`, against the unitary `target` on that block:
///   F = [sum_i Tr P E(|i><i|) P + d^2 F_e] / (d (d+1)),
///   F_e = (1/d^2) Re sum_ij <i| U' E(|i><j|) U |j>.
/// E(|i><j|) comes by linearity from four propagated pure states.
inline double block_agf(const ChannelAction& channel,
                        const std::vector<int>& idx,
                        const Eigen::MatrixXcd& target) {
  const int d = static_cast<int>(idx.size());
  const int dim = channel.dim();
  auto basis_rho = [&](int i, int j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(idx[i], idx[j]) = 1.0;
    return m;
  };
  auto project = [&](const Eigen::MatrixXcd& rho) {
    Eigen::MatrixXcd b(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = rho(idx[i], idx[j]);
    return b;
  };
  std::vector<std::vector<Eigen::MatrixXcd>> emap(
      d, std::vector<Eigen::MatrixXcd>(d));
  for (int i = 0; i < d; ++i) emap[i][i] = project(channel.apply(basis_rho(i, i)));
  const std::complex<double> im(0.0, 1.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      // |+> = (|i>+|j>)/sqrt2, |y> = (|i>+i|j>)/sqrt2
      Eigen::MatrixXcd plus = 0.5 * (basis_rho(i, i) + basis_rho(i, j) +
                                     basis_rho(j, i) + basis_rho(j, j));
      Eigen::MatrixXcd ypl = 0.5 * (basis_rho(i, i) - im * basis_rho(i, j) +
                                    im * basis_rho(j, i) + basis_rho(j, j));
      const Eigen::MatrixXcd ep = project(channel.apply(plus));
      const Eigen::MatrixXcd ey = project(channel.apply(ypl));
      emap[i][j] = ep + im * ey -
                   0.5 * (1.0 + im) * (emap[i][i] + emap[j][j]);
      emap[j][i] = emap[i][j].adjoint();
    }
  }
  double trace_sum = 0.0;
  for (int i = 0; i < d; ++i) trace_sum += std::real(emap[i][i].trace());
  std::complex<double> fe = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      fe += (target.col(i).adjoint() * emap[i][j] * target.col(j))(0, 0);
  return (trace_sum + std::real(fe)) / (d * (d + 1.0));
}

}  // namespace detail

struct SweepPoint {
  double sigma_over_g = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

/// One noisy realization: build H with the draw, evolve for the pi
/// condition of the noiseless legs, and score with the chosen metric.
inline double realization_fidelity(const HybridOps& ops,
                                   const CavityConfig& config,
                                   const NoiseDraw& draw,
                                   TwoQubitMetric metric) {
  const EntanglerSpec spec = entangler_spec(ops.omega_ge[0], ops.omega_ge[1]);
  const Eigen::MatrixXcd h = noisy_hamiltonian(ops, config, draw);
  const detail::ChannelAction channel(ops, config, h, spec.duration);
  const HybridSpace& sp = ops.space;
  const int ge0 = sp.find(0, 1, 0);
  const int eg0 = sp.find(1, 0, 0);
  switch (metric) {
    case TwoQubitMetric::state_transfer: {
      Eigen::MatrixXcd rho0 =
          Eigen::MatrixXcd::Zero(channel.dim(), channel.dim());
      rho0(ge0, ge0) = 1.0;
      return std::real(channel.apply(rho0)(eg0, eg0));
    }
    case TwoQubitMetric::block_agf_d2: {
      Eigen::Matrix2cd target;
      const double xi = spec.xi;
      target << std::cos(xi), std::sin(xi), std::sin(xi), -std::cos(xi);
      return detail::block_agf(channel, {ge0, eg0}, target);
    }
    case TwoQubitMetric::process_agf_d4: {
      const int gg0 = sp.find(0, 0, 0);
      const int ee0 = sp.find(1, 1, 0);
      if (ee0 < 0)
        throw config_error("process_agf_d4 needs excitation cap >= 2");
      return detail::block_agf(channel, {gg0, ge0, eg0, ee0},
                               entangler_unitary(spec.xi));
    }
  }
  throw config_error("realization_fidelity: unknown metric");
}

/// Minimal excitation cap that keeps the metric exact.
inline int metric_excitation_cap(TwoQubitMetric metric) {
  return metric == TwoQubitMetric::process_agf_d4 ? 2 : 1;
}

/// Mean fidelity vs sigma/g for quasi-static Gaussian draws; realizations
/// use seeds mix(base, point*realizations + r) so any grid subdivision is
/// reproducible.
inline std::vector<SweepPoint> fidelity_sweep(
    const CavityConfig& config_in, const EigenSystem& eigen1,
    const EigenSystem& eigen2, const std::vector<double>& sigma_over_g,
    std::size_t n_realizations, std::uint64_t base_seed,
    TwoQubitMetric metric = TwoQubitMetric::state_transfer, int threads = 0) {
  if (n_realizations < 100)
    throw config_error("fidelity_sweep: need n_realizations >= 100");
  CavityConfig config = config_in;
  if (config.max_excitation < 0)
    config.max_excitation = metric_excitation_cap(metric);
  const HybridOps ops = effective_hamiltonian(config, eigen1, eigen2);
  const double gref = std::max(config.g1, config.g2);
  std::vector<SweepPoint> out;
  for (std::size_t p = 0; p < sigma_over_g.size(); ++p) {
    const double sigma = sigma_over_g[p] * gref;
    std::vector<double> fids(n_realizations, 0.0);
    parallel_for(
        n_realizations,
        [&](std::size_t r) {
          const NoiseDraw draw =
              draw_noise(sigma, mix_seed(base_seed, p * n_realizations + r),
                         config.correlated_noise);
          fids[r] = realization_fidelity(ops, config, draw, metric);
        },
        threads);
    SweepPoint pt;
    pt.sigma_over_g = sigma_over_g[p];
    pt.n = n_realizations;
    double sum = 0.0;
    for (double f : fids) sum += f;
    pt.mean = sum / static_cast<double>(n_realizations);
    double var = 0.0;
    for (double f : fids) var += (f - pt.mean) * (f - pt.mean);
    var /= static_cast<double>(n_realizations - 1);
    pt.stderr_ = std::sqrt(var / static_cast<double>(n_realizations));
    out.push_back(pt);
  }
  return out;
}

}  // namespace stq
