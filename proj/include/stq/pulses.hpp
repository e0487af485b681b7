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
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "stq/units.hpp"

namespace stq {

using Matrix2cd = Eigen::Matrix2cd;
using complexd = std::complex<double>;

inline const Matrix2cd kSigmaX = (Matrix2cd() << 0, 1, 1, 0).finished();
inline const Matrix2cd kSigmaY =
    (Matrix2cd() << 0, complexd(0, -1), complexd(0, 1), 0).finished();
inline const Matrix2cd kSigmaZ = (Matrix2cd() << 1, 0, 0, -1).finished();

/// R(n, angle) = exp(-i angle/2 n.sigma), n normalized internally.
inline Matrix2cd axis_rotation(const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  Matrix2cd u;
  u << complexd(c, -s * n.z()), complexd(-s * n.y(), -s * n.x()),
       complexd(s * n.y(), -s * n.x()), complexd(c, s * n.z());
  return u;
}

/// Recover (axis, angle) of a 2x2 unitary up to global phase.
/// angle is folded into [0, 2pi).
inline std::pair<Eigen::Vector3d, double> axis_angle_of(const Matrix2cd& u) {
  const complexd det = u.determinant();
  const Matrix2cd v = u / std::sqrt(det);
  double c = 0.5 * std::real(v.trace());
  c = std::clamp(c, -1.0, 1.0);
  const double half = std::acos(c);
  Eigen::Vector3d n(0, 0, 1);
  const double s = std::sin(half);
  if (std::abs(s) > 1e-12) {
    n.x() = -std::imag(v(0, 1)) / s;
    n.y() = -std::real(v(0, 1)) / s;
    n.z() = -std::imag(v(0, 0)) / s;
  }
  return {n, 2.0 * half};
}

inline double trace_fidelity(const Matrix2cd& target, const Matrix2cd& actual) {
  return 0.5 * std::abs((target.adjoint() * actual).trace());
}

inline double average_gate_fidelity(const Matrix2cd& target,
                                    const Matrix2cd& actual) {
  const double t = std::abs((target.adjoint() * actual).trace());
  return (t * t + 2.0) / 6.0;
}

/// Frobenius distance after aligning global phase on the
/// largest-magnitude entry of the target overlap.
template <typename Derived>
double phase_stripped_distance(const Eigen::MatrixBase<Derived>& target,
                               const Eigen::MatrixBase<Derived>& actual) {
  const complexd tr = (target.adjoint() * actual).trace();
  if (std::abs(tr) < 1e-300) return (actual - target).norm();
  const complexd phase = tr / std::abs(tr);
  return (actual - phase * target).norm();
}

// ---------------------------------------------------------------------------
// Pulse sequences
// ---------------------------------------------------------------------------

enum class GateFamily { naive, corpse, geometric, non_cyclic };

inline const char* family_name(GateFamily f) {
  switch (f) {
    case GateFamily::naive: return "naive";
    case GateFamily::corpse: return "corpse";
    case GateFamily::geometric: return "geometric";
    case GateFamily::non_cyclic: return "non_cyclic";
  }
  return "?";
}

inline GateFamily family_from_name(const std::string& s) {
  if (s == "naive") return GateFamily::naive;
  if (s == "corpse") return GateFamily::corpse;
  if (s == "geometric") return GateFamily::geometric;
  if (s == "non_cyclic") return GateFamily::non_cyclic;
  throw config_error("unknown gate family: " + s);
}

/// One constant-Hamiltonian piece: rotation axis angle phi in the x-y
/// plane, pulse area theta >= 0, Rabi rate omega0 > 0.
struct PulseSegment {
  double phi = 0.0;
  double theta = 0.0;
  double omega0 = 1.0;

  double duration() const { return theta / omega0; }
};

struct PulseSequence {
  std::vector<PulseSegment> segments;  // temporal order
  GateFamily family = GateFamily::naive;
  Eigen::Vector3d target_axis{1, 0, 0};
  double target_angle = 0.0;

  double total_area() const {
    double a = 0.0;
    for (const auto& s : segments) a += s.theta;
    return a;
  }
  double duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration();
    return t;
  }
  Matrix2cd target_unitary() const {
    return axis_rotation(target_axis, target_angle);
  }
};

/// One-piece evolution with a quasi-static detuning offset:
/// exp[-i (omega0/2 (cos phi sx + sin phi sy) + delta/2 sz) theta/omega0].
inline Matrix2cd rotation_unitary(const PulseSegment& seg, double delta = 0.0) {
  const double t = seg.duration();
  const double rx = 0.5 * seg.omega0 * std::cos(seg.phi) * t;
  const double ry = 0.5 * seg.omega0 * std::sin(seg.phi) * t;
  const double rz = 0.5 * delta * t;
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  if (r < 1e-300) return Matrix2cd::Identity();
  const double c = std::cos(r), s = std::sin(r) / r;
  Matrix2cd u;
  u << complexd(c, -s * rz), complexd(-s * ry, -s * rx),
       complexd(s * ry, -s * rx), complexd(c, s * rz);
  return u;
}

/// Product of segment unitaries in temporal order (first segment acts first).
inline Matrix2cd sequence_unitary(const PulseSequence& seq, double delta = 0.0) {
  Matrix2cd u = Matrix2cd::Identity();
  for (const auto& seg : seq.segments) u = rotation_unitary(seg, delta) * u;
  return u;
}

/// Short-form CORPSE replacement of R(phi, theta): areas
/// theta/2 - asin(sin(theta/2)/2), 2pi - 2 asin(sin(theta/2)/2),
/// theta/2 - asin(sin(theta/2)/2), middle phase shifted by pi.
/// Cancels quasi-static sz offsets through third order.
inline PulseSequence corpse_sequence(double phi, double theta,
                                     double omega0 = 1.0) {
  const double s = std::asin(0.5 * std::sin(0.5 * theta));
  PulseSequence seq;
  seq.family = GateFamily::corpse;
  seq.segments = {{phi, 0.5 * theta - s, omega0},
                  {phi + kPi, kTwoPi - 2.0 * s, omega0},
                  {phi, 0.5 * theta - s, omega0}};
  const auto [axis, ang] =
      axis_angle_of(axis_rotation({std::cos(phi), std::sin(phi), 0.0}, theta));
  seq.target_axis = axis;
  seq.target_angle = ang;
  return seq;
}

/// Cyclic (orange-slice) geometric gate. Areas (theta_p, pi, pi - theta_p)
/// always total 2pi; phases (phi_p - pi/2, phi_p + gamma_p - pi/2,
/// phi_p - pi/2). Realizes exp(+i gamma_p n.sigma) with
/// n = (sin theta_p cos phi_p, sin theta_p sin phi_p, cos theta_p),
/// i.e. R(n, -2 gamma_p) up to global phase.
inline PulseSequence geometric_sequence(double theta_p, double phi_p,
                                        double gamma_p, double omega0 = 1.0) {
  if (theta_p < 0.0 || theta_p > kPi)
    throw config_error("geometric_sequence: theta_p outside [0, pi]");
  PulseSequence seq;
  seq.family = GateFamily::geometric;
  seq.segments = {{phi_p - 0.5 * kPi, theta_p, omega0},
                  {phi_p + gamma_p - 0.5 * kPi, kPi, omega0},
                  {phi_p - 0.5 * kPi, kPi - theta_p, omega0}};
  seq.target_axis = {std::sin(theta_p) * std::cos(phi_p),
                     std::sin(theta_p) * std::sin(phi_p), std::cos(theta_p)};
  seq.target_angle = -2.0 * gamma_p;
  return seq;
}

/// Closed form of the two-piece gate, entrywise.
inline Matrix2cd non_cyclic_closed_form(double chi0, double phi0, double phi1,
                                        double beta0) {
  const double c = std::cos(0.5 * chi0), s = std::sin(0.5 * chi0);
  const double cb = std::cos(0.5 * beta0), sb = std::sin(0.5 * beta0);
  const complexd e0 = std::polar(1.0, phi0);
  const complexd e1 = std::polar(1.0, phi1);
  const complexd e01 = std::polar(1.0, phi0 + phi1);
  Matrix2cd u;
  u << c * cb - s * sb * std::conj(e1),
       -c * sb * std::conj(e01) - cb * s * std::conj(e0),
       c * sb * e01 + cb * s * e0,
       c * cb - s * sb * e1;
  return u;
}

/// Open-path two-piece gate: segments (phi0 + pi/2, chi0) then
/// (phi0 + phi1 + pi/2, beta0). Shorter than the cyclic construction
/// whenever chi0 + beta0 < 2pi.
inline PulseSequence non_cyclic_sequence(double chi0, double phi0, double phi1,
                                         double beta0, double omega0 = 1.0) {
  if (chi0 <= 0.0 || beta0 <= 0.0)
    throw config_error("non_cyclic_sequence: chi0 and beta0 must be > 0");
  PulseSequence seq;
  seq.family = GateFamily::non_cyclic;
  seq.segments = {{phi0 + 0.5 * kPi, chi0, omega0},
                  {phi0 + phi1 + 0.5 * kPi, beta0, omega0}};
  const auto [axis, ang] =
      axis_angle_of(non_cyclic_closed_form(chi0, phi0, phi1, beta0));
  seq.target_axis = axis;
  seq.target_angle = ang;
  return seq;
}

/// Naive gate given as (phi, theta) pieces in temporal order.
inline PulseSequence naive_sequence(
    const std::vector<std::pair<double, double>>& pieces,
    const Eigen::Vector3d& axis, double angle, double omega0 = 1.0) {
  PulseSequence seq;
  seq.family = GateFamily::naive;
  for (const auto& [phi, theta] : pieces) seq.segments.push_back({phi, theta, omega0});
  seq.target_axis = axis.normalized();
  seq.target_angle = angle;
  return seq;
}

// ---------------------------------------------------------------------------
// Gate catalog: the four Clifford representatives in all four families.
// Negative-axis pieces are encoded as phi -> phi + pi with theta > 0.
// ---------------------------------------------------------------------------

inline const std::array<const char*, 4> kCatalogGates = {"x_pi2", "z_pi2",
                                                         "xz_pi", "xyz_4pi3"};

inline std::map<std::string, std::map<GateFamily, PulseSequence>>
clifford_catalog(double omega0 = 1.0) {
  const double p = kPi;
  const Eigen::Vector3d ex{1, 0, 0}, ez{0, 0, 1};
  const Eigen::Vector3d exz = Eigen::Vector3d(1, 0, 1).normalized();
  const Eigen::Vector3d exyz = Eigen::Vector3d(1, 1, -1).normalized();

  std::map<std::string, std::map<GateFamily, PulseSequence>> cat;

  // naive columns (temporal order: rightmost factor of the printed product first)
  cat["x_pi2"][GateFamily::naive] =
      naive_sequence({{0.0, p / 2}}, ex, p / 2, omega0);
  cat["z_pi2"][GateFamily::naive] = naive_sequence(
      {{p, p / 2}, {p / 2, p / 2}, {0.0, p / 2}}, ez, p / 2, omega0);
  cat["xz_pi"][GateFamily::naive] =
      naive_sequence({{0.0, p}, {1.5 * p, p / 2}}, exz, p, omega0);
  cat["xyz_4pi3"][GateFamily::naive] =
      naive_sequence({{1.5 * p, p / 2}, {p, p / 2}}, exyz, 4 * p / 3, omega0);

  // CORPSE: replace each naive piece, keeping temporal order
  for (const auto& name : kCatalogGates) {
    const PulseSequence& nai = cat[name][GateFamily::naive];
    PulseSequence seq;
    seq.family = GateFamily::corpse;
    seq.target_axis = nai.target_axis;
    seq.target_angle = nai.target_angle;
    for (const auto& piece : nai.segments) {
      const PulseSequence c = corpse_sequence(piece.phi, piece.theta, omega0);
      seq.segments.insert(seq.segments.end(), c.segments.begin(),
                          c.segments.end());
    }
    cat[name][GateFamily::corpse] = seq;
  }

  cat["x_pi2"][GateFamily::geometric] =
      geometric_sequence(p / 2, 0.0, -p / 4, omega0);
  cat["z_pi2"][GateFamily::geometric] =
      geometric_sequence(0.0, 0.0, -p / 4, omega0);
  cat["xz_pi"][GateFamily::geometric] =
      geometric_sequence(p / 4, 0.0, -p / 2, omega0);
  cat["xyz_4pi3"][GateFamily::geometric] = geometric_sequence(
      p - std::atan(std::sqrt(2.0)), p / 4, -2 * p / 3, omega0);

  cat["x_pi2"][GateFamily::non_cyclic] =
      non_cyclic_sequence(p / 8, p / 2, p, 5 * p / 8, omega0);
  cat["z_pi2"][GateFamily::non_cyclic] =
      non_cyclic_sequence(p, 0.0, p / 4, p, omega0);
  cat["xz_pi"][GateFamily::non_cyclic] =
      non_cyclic_sequence(p / 2, 0.0, -p / 2, p, omega0);
  cat["xyz_4pi3"][GateFamily::non_cyclic] =
      non_cyclic_sequence(1.5 * p, 0.0, p / 2, p / 2, omega0);

  // pin the intended targets on the geometric/non-cyclic entries too
  for (const auto& name : kCatalogGates) {
    const PulseSequence& nai = cat[name][GateFamily::naive];
    for (GateFamily f : {GateFamily::geometric, GateFamily::non_cyclic}) {
      cat[name][f].target_axis = nai.target_axis;
      cat[name][f].target_angle = nai.target_angle;
    }
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Quasi-static closed-form fidelities for rotations about an x-y plane axis
// by angle gamma, with delta = (sz offset)/omega0. Trace-fidelity metric
// |Tr(Ut' Ua)|/2. The quadratic term cancels for CORPSE, leaving a quartic.
// ---------------------------------------------------------------------------

struct QuasistaticExtras {
  double chi0 = 0.0;   // non-cyclic only; 0 means use 0.01*gamma
  double beta0 = 0.0;  // non-cyclic only; 0 means use 1.01*gamma
};

inline double quasistatic_fidelity(GateFamily family, double gamma,
                                   double delta,
                                   const QuasistaticExtras& extras = {}) {
  const double d2 = delta * delta;
  switch (family) {
    case GateFamily::naive:
      return 0.25 * (4.0 - d2 + d2 * std::cos(gamma));
    case GateFamily::non_cyclic: {
      const double chi0 = extras.chi0 != 0.0 ? extras.chi0 : 0.01 * gamma;
      const double beta0 = extras.beta0 != 0.0 ? extras.beta0 : 1.01 * gamma;
      return 1.0 + 0.25 * d2 * (-3.0 + 2.0 * std::cos(beta0) -
                                std::cos(gamma) + 2.0 * std::cos(chi0));
    }
    case GateFamily::geometric:
      return 1.0 - 0.75 * d2 + d2 * std::cos(0.5 * gamma) -
             0.25 * d2 * std::cos(gamma);
    case GateFamily::corpse: {
      const double d4 = d2 * d2;
      const double g = gamma;
      const double t1 = 7.0 + (g - kTwoPi) * (g - kTwoPi);
      const double t2 =
          6.0 * std::cos(g) + std::cos(2.0 * g) +
          2.0 * std::sin(0.5 * g) *
              ((2.0 * kTwoPi - 2.0 * g) * std::cos(0.5 * g) +
               std::sqrt(2.0) * std::sqrt(7.0 + std::cos(g)) *
                   (g - kTwoPi + std::sin(g)));
      return 1.0 - d4 / 32.0 * (t1 - t2);
    }
  }
  throw config_error("quasistatic_fidelity: unknown family");
}

}  // namespace stq
