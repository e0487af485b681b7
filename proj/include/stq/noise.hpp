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

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "stq/rng.hpp"
#include "stq/units.hpp"

namespace stq {

/// One-sided power law S(w) = A / (w t0)^alpha on [omega_ir, omega_uv].
/// The convention throughout: a process with this spectrum has
/// variance (1/pi) * Integral S(w) dw over the band.
struct SpectralModel {
  double amplitude_a = 0.0;  // rad^2/ns
  double alpha = 1.0;
  double t0 = 1.0;           // ns
  double omega_ir = 0.0;     // rad/ns
  double omega_uv = 0.0;     // rad/ns

  void validate() const {
    if (!(omega_ir > 0.0) || !(omega_uv > omega_ir))
      throw config_error("SpectralModel: need 0 < omega_ir < omega_uv");
    if (alpha < 0.5 || alpha > 2.0)
      throw config_error("SpectralModel: alpha outside [0.5, 2]");
    if (amplitude_a < 0.0)
      throw config_error("SpectralModel: amplitude_a must be >= 0");
  }

  double psd(double w) const {
    return amplitude_a / std::pow(w * t0, alpha);
  }

  /// Integral of S over the band (closed form).
  double band_integral() const {
    if (std::abs(alpha - 1.0) < 1e-12)
      return amplitude_a / t0 * std::log(omega_uv / omega_ir);
    const double e = 1.0 - alpha;
    return amplitude_a * std::pow(t0, -alpha) *
           (std::pow(omega_uv, e) - std::pow(omega_ir, e)) / e;
  }

  /// Process variance implied by the spectrum.
  double variance() const { return band_integral() / kPi; }
};

/// Which normalization ties the amplitude to a target standard deviation.
///   eq11_pi: Integral S dw = pi sigma^2  (process variance = sigma^2)
///   plain:   Integral S dw = sigma^2
enum class CalibrationConvention { eq11_pi, plain };

/// Solve for the amplitude A given sigma and the rest of the model.
inline double calibrate_amplitude(
    double sigma, const SpectralModel& shape,
    CalibrationConvention conv = CalibrationConvention::eq11_pi) {
  if (sigma < 0.0) throw config_error("calibrate_amplitude: sigma < 0");
  SpectralModel unit = shape;
  unit.amplitude_a = 1.0;
  unit.validate();
  const double target = (conv == CalibrationConvention::eq11_pi)
                            ? kPi * sigma * sigma
                            : sigma * sigma;
  return target / unit.band_integral();
}

/// Sum-of-cosines synthesizer on a logarithmic frequency grid:
/// delta(t) = sum_k sqrt(2 S(w_k) dw_k / pi) cos(w_k t + phi_k),
/// phases i.i.d. uniform. Ensemble variance equals (1/pi) Integral S dw.
class NoiseSynth {
 public:
  NoiseSynth() = default;

  NoiseSynth(const SpectralModel& model, std::uint64_t seed,
             int points_per_decade = 40) {
    model.validate();
    const double decades = std::log10(model.omega_uv / model.omega_ir);
    const int n = std::max(2, static_cast<int>(decades * points_per_decade));
    freq_.resize(n);
    amp_.resize(n);
    phase_.resize(n);
    Rng rng(seed);
    const double lr = std::log(model.omega_uv / model.omega_ir) / n;
    for (int k = 0; k < n; ++k) {
      const double lo = model.omega_ir * std::exp(k * lr);
      const double hi = model.omega_ir * std::exp((k + 1) * lr);
      freq_[k] = std::sqrt(lo * hi);
      amp_[k] = std::sqrt(2.0 * model.psd(freq_[k]) * (hi - lo) / kPi);
      phase_[k] = rng.uniform(0.0, kTwoPi);
    }
  }

  double operator()(double t) const {
    double v = 0.0;
    for (std::size_t k = 0; k < freq_.size(); ++k)
      v += amp_[k] * std::cos(freq_[k] * t + phase_[k]);
    return v;
  }

  /// n samples at t0 + (i + offset)*dt via per-component phase rotation;
  /// one trig call per component instead of one per sample.
  std::vector<double> sample(double t_start, double dt, std::size_t n,
                             double offset = 0.0) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < freq_.size(); ++k) {
      const std::complex<double> step = std::polar(1.0, freq_[k] * dt);
      std::complex<double> z =
          std::polar(1.0, freq_[k] * (t_start + offset * dt) + phase_[k]);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] += amp_[k] * z.real();
        z *= step;
      }
    }
    return out;
  }

  std::size_t components() const { return freq_.size(); }

 private:
  std::vector<double> freq_, amp_, phase_;
};

struct NoiseTrace {
  double dt = 0.0;
  std::vector<double> samples;
  std::uint64_t seed = 0;
};

inline NoiseTrace generate_trace(const SpectralModel& model, double dt,
                                 std::size_t n, std::uint64_t seed,
                                 int points_per_decade = 40) {
  model.validate();
  if (n < 2) throw config_error("generate_trace: need n >= 2");
  if (dt > kPi / model.omega_uv + 1e-15)
    throw config_error("generate_trace: dt too coarse for omega_uv");
  NoiseTrace trace;
  trace.dt = dt;
  trace.seed = seed;
  if (model.amplitude_a == 0.0) {
    trace.samples.assign(n, 0.0);
    return trace;
  }
  trace.samples = NoiseSynth(model, seed, points_per_decade).sample(0.0, dt, n);
  return trace;
}

/// Welch-averaged one-sided PSD estimate (Hann window, half overlap),
/// normalized so that (1/pi) * Integral psd dw recovers the sample variance.
struct PsdEstimate {
  std::vector<double> omega;  // rad/ns
  std::vector<double> psd;

  double band_integral(double lo, double hi) const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
      const double a = std::clamp(omega[i], lo, hi);
      const double b = std::clamp(omega[i + 1], lo, hi);
      acc += 0.5 * (psd[i] + psd[i + 1]) * (b - a);
    }
    return acc;
  }
};

inline PsdEstimate psd_estimate(const NoiseTrace& trace, int n_segments = 8) {
  const std::size_t n = trace.samples.size();
  if (n < 1024) throw config_error("psd_estimate: trace too short (n < 1024)");
  std::size_t seg_len = 1;
  while (seg_len * 2 <= n / static_cast<std::size_t>(n_segments)) seg_len *= 2;

  std::vector<double> window(seg_len);
  double wnorm = 0.0;
  for (std::size_t i = 0; i < seg_len; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / (seg_len - 1)));
    wnorm += window[i] * window[i];
  }
  wnorm /= seg_len;

  const std::size_t nbins = seg_len / 2 + 1;
  std::vector<double> acc(nbins, 0.0);
  int count = 0;
  Eigen::FFT<double> fft;
  std::vector<double> buf(seg_len);
  std::vector<std::complex<double>> spec;
  for (std::size_t start = 0; start + seg_len <= n; start += seg_len / 2) {
    double mean = 0.0;
    for (std::size_t i = 0; i < seg_len; ++i) mean += trace.samples[start + i];
    mean /= seg_len;
    for (std::size_t i = 0; i < seg_len; ++i)
      buf[i] = (trace.samples[start + i] - mean) * window[i];
    fft.fwd(spec, buf);
    for (std::size_t b = 0; b < nbins; ++b)
      acc[b] += std::norm(spec[b]) * trace.dt / (seg_len * wnorm);
    ++count;
  }
  PsdEstimate est;
  est.omega.resize(nbins);
  est.psd.resize(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    est.omega[b] = kTwoPi * b / (seg_len * trace.dt);
    est.psd[b] = acc[b] / count;
  }
  return est;
}

/// Log-log slope of the PSD over [omega_lo, omega_hi] by least squares.
inline double psd_loglog_slope(const PsdEstimate& est, double omega_lo,
                               double omega_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < est.omega.size(); ++i) {
    if (est.omega[i] < omega_lo || est.omega[i] > omega_hi) continue;
    if (est.psd[i] <= 0.0) continue;
    const double x = std::log(est.omega[i]), y = std::log(est.psd[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 3) throw numerical_error("psd_loglog_slope: too few bins in band");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Quasi-static mode: one Gaussian offset per realization.
inline double quasistatic_draw(double sigma, std::uint64_t seed) {
  Rng rng(seed);
  return sigma * rng.gaussian();
}

}  // namespace stq
