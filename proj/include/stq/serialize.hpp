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

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "stq/noise.hpp"
#include "stq/pulses.hpp"
#include "stq/units.hpp"

namespace stq {

using json = nlohmann::json;

inline json to_json(const PulseSequence& seq) {
  json j;
  j["family"] = family_name(seq.family);
  j["target"] = {{"axis", {seq.target_axis.x(), seq.target_axis.y(),
                           seq.target_axis.z()}},
                 {"angle_rad", seq.target_angle}};
  j["omega0_rad_ns"] = seq.segments.empty() ? 1.0 : seq.segments[0].omega0;
  json segs = json::array();
  for (const auto& s : seq.segments)
    segs.push_back({{"phi_rad", s.phi}, {"theta_rad", s.theta}});
  j["segments"] = segs;
  return j;
}

inline PulseSequence sequence_from_json(const json& j) {
  PulseSequence seq;
  seq.family = family_from_name(j.at("family").get<std::string>());
  const auto& t = j.at("target");
  const auto axis = t.at("axis").get<std::vector<double>>();
  if (axis.size() != 3) throw config_error("sequence_from_json: bad axis");
  seq.target_axis = Eigen::Vector3d(axis[0], axis[1], axis[2]);
  seq.target_angle = t.at("angle_rad").get<double>();
  const double omega0 = j.value("omega0_rad_ns", 1.0);
  for (const auto& s : j.at("segments")) {
    PulseSegment seg;
    seg.phi = s.at("phi_rad").get<double>();
    seg.theta = s.at("theta_rad").get<double>();
    seg.omega0 = omega0;
    if (seg.theta < 0.0 || seg.omega0 <= 0.0)
      throw config_error("sequence_from_json: invalid segment");
    seq.segments.push_back(seg);
  }
  return seq;
}

inline json to_json(const SpectralModel& m) {
  return {{"amplitude_a", m.amplitude_a}, {"alpha", m.alpha},
          {"t0_ns", m.t0},               {"omega_ir_rad_ns", m.omega_ir},
          {"omega_uv_rad_ns", m.omega_uv}};
}

inline SpectralModel spectral_model_from_json(const json& j) {
  SpectralModel m;
  m.amplitude_a = j.at("amplitude_a").get<double>();
  m.alpha = j.at("alpha").get<double>();
  m.t0 = j.at("t0_ns").get<double>();
  m.omega_ir = j.at("omega_ir_rad_ns").get<double>();
  m.omega_uv = j.at("omega_uv_rad_ns").get<double>();
  m.validate();
  return m;
}

/// FNV-1a over the canonical dump; stamped into every output.
inline std::string config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

struct OutputMeta {
  std::string command;
  std::string config_sha;
  std::uint64_t seed = 0;

  std::string header() const {
    std::ostringstream os;
    os << "# stqsim v" << kVersion << "\n"
       << "# cmd=" << command << "\n"
       << "# config_sha=" << config_sha << "\n"
       << "# seed=" << seed << "\n";
    return os.str();
  }

  json as_json() const {
    return {{"version", kVersion}, {"cmd", command},
            {"config_sha", config_sha}, {"seed", seed}};
  }
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const OutputMeta& meta,
            const std::vector<std::string>& columns)
      : out_(path) {
    if (!out_) throw config_error("cannot open output file: " + path);
    out_ << meta.header();
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    out_ << std::setprecision(12);
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
  }

 private:
  std::ofstream out_;
};

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace stq
