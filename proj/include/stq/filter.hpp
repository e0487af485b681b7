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
#include <vector>

#include "stq/noise.hpp"
#include "stq/pulses.hpp"
#include "stq/units.hpp"

namespace stq {

/// Adjoint representation V_ij[U] = Tr(U' sigma_i U sigma_j)/2 (real for
/// any 2x2 unitary); a homomorphism: V[UV] = V[U] V[V].
inline Eigen::Matrix3d adjoint_rep(const Matrix2cd& u) {
  static const std::array<Matrix2cd, 3> pauli = {kSigmaX, kSigmaY, kSigmaZ};
  Eigen::Matrix3d v;
  for (int i = 0; i < 3; ++i) {
    const Matrix2cd rot = u.adjoint() * pauli[i] * u;
    for (int j = 0; j < 3; ++j)
      v(i, j) = 0.5 * std::real((rot * pauli[j]).trace());
  }
  return v;
}

namespace detail {

/// Integral of e^{ixt} over [0, T]; sinc form is stable through x = 0.
inline std::complex<double> phase_integral(double x, double T) {
  const double u = 0.5 * x * T;
  const double sinc = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
  return std::complex<double>(std::cos(u), std::sin(u)) * (T * sinc);
}

// so3 rotation about z by phi
inline Eigen::Matrix3d zrot(double phi) {
  Eigen::Matrix3d z;
  const double c = std::cos(phi), s = std::sin(phi);
  z << c, -s, 0, s, c, 0, 0, 0, 1;
  return z;
}

}  // namespace detail

/// M(w) = Integral_0^T e^{iwt} V[U_c(t)] dt for the whole sequence,
/// stitched segment by segment:
///   M = sum_k e^{iw T_{k-1}'} M^(k)(w) Lambda^(k-1),
/// Lambda^(k) = V[Q_k] with Q_k the cumulative unitary. The single-segment
/// block for a rotation about the x axis has entries built from
/// Integral e^{iwt}, e^{iwt}cos(Omega0 t), e^{iwt}sin(Omega0 t); a general
/// x-y axis is the z-conjugated block. The control matrix is -iw * M,
/// so the apparent poles at w = +-Omega0 never arise here.
inline Eigen::Matrix3cd control_integral_matrix(const PulseSequence& seq,
                                                double w) {
  if (seq.segments.empty())
    throw config_error("control_integral_matrix: empty sequence");
  Eigen::Matrix3cd total = Eigen::Matrix3cd::Zero();
  Eigen::Matrix3d lambda = Eigen::Matrix3d::Identity();
  Matrix2cd cumulative = Matrix2cd::Identity();
  double t_acc = 0.0;
  for (const auto& seg : seq.segments) {
    const double T = seg.duration();
    const std::complex<double> i1 = detail::phase_integral(w, T);
    const std::complex<double> ep = detail::phase_integral(w + seg.omega0, T);
    const std::complex<double> em = detail::phase_integral(w - seg.omega0, T);
    const std::complex<double> ic = 0.5 * (ep + em);
    const std::complex<double> is = (ep - em) / std::complex<double>(0.0, 2.0);
    Eigen::Matrix3cd block = Eigen::Matrix3cd::Zero();
    block(0, 0) = i1;
    block(1, 1) = ic;
    block(1, 2) = -is;
    block(2, 1) = is;
    block(2, 2) = ic;
    const Eigen::Matrix3d z = detail::zrot(seg.phi);
    const Eigen::Matrix3cd seg_m =
        z.cast<std::complex<double>>() * block *
        z.transpose().cast<std::complex<double>>();
    total += std::polar(1.0, w * t_acc) * (seg_m * lambda.cast<std::complex<double>>());
    cumulative = rotation_unitary(seg) * cumulative;
    lambda = adjoint_rep(cumulative);
    t_acc += T;
  }
  return total;
}

/// R_ij(w) = -iw Integral_0^T dt e^{iwt} Tr(U' sigma_i U sigma_j)/2.
inline Eigen::Matrix3cd control_matrix(const PulseSequence& seq, double w) {
  return std::complex<double>(0.0, -w) * control_integral_matrix(seq, w);
}

/// F_z(w)/w^2 = sum_j |M_zj(w)|^2; finite at w -> 0.
inline double fz_over_w2(const PulseSequence& seq, double w) {
  const Eigen::Matrix3cd m = control_integral_matrix(seq, w);
  return m.row(2).squaredNorm();
}

/// F_z(w) = sum_j |R_zj(w)|^2, the dephasing filter transfer function.
inline double filter_fn_at(const PulseSequence& seq, double w) {
  return w * w * fz_over_w2(seq, w);
}

struct FilterFunction {
  std::vector<double> grid;    // rad/ns, sorted
  std::vector<double> values;  // F_z(w) >= 0
};

inline FilterFunction filter_fn(const PulseSequence& seq,
                                const std::vector<double>& grid) {
  FilterFunction ff;
  ff.grid = grid;
  ff.values.reserve(grid.size());
  for (double w : grid) ff.values.push_back(filter_fn_at(seq, w));
  return ff;
}

/// Average fidelity under the given spectrum:
///   F = 1 - (1/2pi) Integral_{ir}^{uv} S(w) F_z(w)/w^2 dw,
/// log-trapezoid with grid-doubling until the change is below tol.
inline double fidelity_from_spectrum(const PulseSequence& seq,
                                     const SpectralModel& model,
                                     int points_per_decade = 200,
                                     double tol = 1e-6) {
  model.validate();
  if (model.amplitude_a == 0.0) return 1.0;
  const double decades = std::log10(model.omega_uv / model.omega_ir);
  auto integrate = [&](int ppd) {
    const int n = std::max(8, static_cast<int>(decades * ppd));
    const double lstep = std::log(model.omega_uv / model.omega_ir) / n;
    double acc = 0.0;
    double w_prev = model.omega_ir;
    double f_prev = model.psd(w_prev) * fz_over_w2(seq, w_prev);
    for (int i = 1; i <= n; ++i) {
      const double w = model.omega_ir * std::exp(i * lstep);
      const double f = model.psd(w) * fz_over_w2(seq, w);
      acc += 0.5 * (f_prev + f) * (w - w_prev);
      w_prev = w;
      f_prev = f;
    }
    return acc / kTwoPi;
  };
  double coarse = integrate(points_per_decade);
  for (int round = 0; round < 4; ++round) {
    points_per_decade *= 2;
    const double fine = integrate(points_per_decade);
    if (std::abs(fine - coarse) < tol) return 1.0 - fine;
    coarse = fine;
  }
  throw numerical_error("fidelity_from_spectrum: integral not converged");
}

}  // namespace stq
