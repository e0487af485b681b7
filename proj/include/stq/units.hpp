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

#include <numbers>
#include <stdexcept>
#include <string>

namespace stq {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kPi = std::numbers::pi;

// All internal angular frequencies are rad/ns. Configs and the CLI speak
// ordinary frequency in GHz; the conversion happens once, at ingestion.
inline constexpr double ghz_to_rad_ns(double f_ghz) { return kTwoPi * f_ghz; }
inline constexpr double rad_ns_to_ghz(double w) { return w / kTwoPi; }

// 1 ueV in rad/ns with hbar = 1 (1 ueV / hbar, hbar = 0.6582119569 ueV ns).
inline constexpr double kUevToRadNs = 1.519267;

// Config/input problems -> CLI exit code 2.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical non-convergence or solver failure -> CLI exit code 3.
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stq
