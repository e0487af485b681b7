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
#include <string>

#include "stq/units.hpp"

namespace stq {

/// Double-quantum-dot device parameters, all in rad/ns.
/// Basis for the static Hamiltonian: {|T0(1,1)>, |S(1,1)>, |S(0,2)>}.
struct DeviceParams {
  double delta_b = 0.0;  // magnetic field gradient
  double tau = 0.0;      // interdot tunneling
  double epsilon = 0.0;  // detuning

  void validate() const {
    if (delta_b < 0.0 || tau < 0.0)
      throw config_error("DeviceParams: delta_b and tau must be >= 0");
  }
};

/// AC detuning drive eps'(t) = eps_ac * cos(omega t + phi(t)).
struct DriveConfig {
  double eps_ac = 0.0;  // drive amplitude, rad/ns
  double omega = 0.0;   // carrier, rad/ns

  void validate() const {
    if (eps_ac <= 0.0 || omega <= 0.0)
      throw config_error("DriveConfig: eps_ac and omega must be > 0");
  }
};

// Eigenbasis of the static Hamiltonian, ordered |g>, |e>, |f| ascending,
// with the dipole matrix d_mn = <m| dH/d_eps |n>.
struct EigenSystem {
  Eigen::Vector3d energies;      // E_g <= E_e <= E_f
  Eigen::Matrix3cd states;       // columns are |g>, |e>, |f>
  Eigen::Matrix3cd dipole;       // d_mn, Hermitian, trace -1
  bool near_degenerate = false;  // some gap < kDegeneracyGap

  double qubit_energy() const { return energies(1) - energies(0); }
  double ef_energy() const { return energies(2) - energies(1); }
  std::complex<double> d_ge() const { return dipole(0, 1); }
  std::complex<double> d_ef() const { return dipole(1, 2); }
  std::complex<double> d_gf() const { return dipole(0, 2); }
};

inline constexpr double kDegeneracyGap = 1e-9;  // rad/ns

/// H_ST = [[0, dB, 0], [dB, 0, sqrt(2) tau], [0, sqrt(2) tau, -eps]].
inline Eigen::Matrix3d build_hst(const DeviceParams& p) {
  Eigen::Matrix3d h;
  const double st = std::sqrt(2.0) * p.tau;
  h << 0.0, p.delta_b, 0.0,
       p.delta_b, 0.0, st,
       0.0, st, -p.epsilon;
  return h;
}

/// Diagonalize H_ST. Eigenvector phases are fixed by making the
/// largest-magnitude component real-positive; only |d_mn| and relative
/// phases are physical. dH/d_eps has the single entry -1 at (3,3), so
/// d_mn = -conj(v_m[2]) * v_n[2].
inline EigenSystem eigensystem(const DeviceParams& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(build_hst(p));
  Eigen::Vector3d evals = solver.eigenvalues();
  Eigen::Matrix3d evecs = solver.eigenvectors();
  for (int i = 0; i < 3; ++i) {
    int k = 0;
    evecs.col(i).cwiseAbs().maxCoeff(&k);
    if (evecs(k, i) < 0.0) evecs.col(i) = -evecs.col(i);
  }
  EigenSystem sys;
  sys.energies = evals;
  sys.states = evecs.cast<std::complex<double>>();
  sys.dipole = -(evecs.row(2).transpose() * evecs.row(2)).cast<std::complex<double>>();
  sys.near_degenerate = (evals(1) - evals(0) < kDegeneracyGap) ||
                        (evals(2) - evals(1) < kDegeneracyGap);
  return sys;
}

/// omega_q = E_e - E_g.
inline double qubit_energy(const DeviceParams& p) {
  return eigensystem(p).qubit_energy();
}

/// d(omega_q)/d_eps = d_ee - d_gg (Hellmann-Feynman). Dimensionless.
inline double qubit_energy_derivative(const DeviceParams& p) {
  const EigenSystem sys = eigensystem(p);
  if (sys.near_degenerate)
    throw numerical_error("qubit_energy_derivative: near-degenerate spectrum");
  return std::real(sys.dipole(1, 1) - sys.dipole(0, 0));
}

/// Locate the transverse sweet spot: the root of d(omega_q)/d_eps in
/// epsilon. The slope is smooth and monotone through the TSS, so bracketed
/// bisection followed by secant polish converges fast. The TSS sits at
/// eps > 0 for delta_b > tau and at eps < 0 for delta_b < tau, which fixes
/// the default bracket half.
inline double find_tss(double delta_b, double tau,
                       double bracket_lo = ghz_to_rad_ns(-20.0),
                       double bracket_hi = ghz_to_rad_ns(20.0)) {
  if (std::abs(delta_b - tau) < 1e-12)
    throw config_error("find_tss: delta_b == tau, branch undefined");
  auto slope = [&](double eps) {
    return qubit_energy_derivative({delta_b, tau, eps});
  };
  double lo = bracket_lo, hi = bracket_hi;
  if (delta_b > tau) {
    lo = std::max(lo, 0.0);
  } else {
    hi = std::min(hi, 0.0);
  }
  double flo = slope(lo), fhi = slope(hi);
  if (flo * fhi > 0.0)
    throw numerical_error("find_tss: no sign change in bracket");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = slope(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  // secant polish on the already-tight bisection bracket
  double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
  for (int it = 0; it < 20 && std::abs(f1) > 1e-12; ++it) {
    if (f1 == f0) break;
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = slope(x1);
  }
  return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

}  // namespace stq
