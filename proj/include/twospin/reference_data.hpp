// Copyright 2026 The twospin Authors
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

#ifndef TWOSPIN_REFERENCE_DATA_HPP_
#define TWOSPIN_REFERENCE_DATA_HPP_

#include <array>
#include <optional>
#include <string_view>

#include "twospin/channels.hpp"
#include "twospin/estimation.hpp"
#include "twospin/spinops.hpp"

namespace twospin {

/// Published relaxation measurements (rates in 1/s, value and standard error)
/// for the three bundled proton pairs.
struct MeasuredRates {
  RateEstimate Gamma1;  // 1/T1, spin 1
  RateEstimate Gamma2;  // 1/T1, spin 2
  RateEstimate gamma1;  // 1/T2, spin 1
  RateEstimate gamma2;  // 1/T2, spin 2
  RateEstimate zq;
  RateEstimate dq;
  RateEstimate gamma3;  // tabulated correlated dephasing rate

  /// gamma1, gamma2, Gamma1, Gamma2 as measured, gamma3 as tabulated.
  NoiseParams noise() const {
    NoiseParams p;
    p.gamma1 = gamma1.rate;
    p.gamma2 = gamma2.rate;
    p.gamma3 = gamma3.rate;
    p.Gamma1 = Gamma1.rate;
    p.Gamma2 = Gamma2.rate;
    return p;
  }
};

struct MoleculeData {
  SpinSystem system;
  MeasuredRates rates;
};

namespace detail {
inline constexpr RateEstimate rate(double value, double err) { return {value, err, 0.0, 1.0, 0}; }
}  // namespace detail

inline const std::array<MoleculeData, 3>& reference_molecules() {
  using detail::rate;
  static const std::array<MoleculeData, 3> data{{
      {*spin_system_preset("btc"),
       {rate(0.264, 0.004), rate(0.255, 0.003), rate(3.741, 0.242), rate(3.048, 0.376),
        rate(0.430, 0.062), rate(12.182, 1.289), rate(5.876, 1.825)}},
      {*spin_system_preset("cytosine"),
       {rate(0.153, 0.002), rate(0.152, 0.014), rate(1.618, 0.080), rate(1.891, 0.096),
        rate(0.189, 0.004), rate(6.975, 0.465), rate(3.393, 1.089)}},
      {*spin_system_preset("coumarin"),
       {rate(0.210, 0.004), rate(0.135, 0.002), rate(6.813, 0.356), rate(6.761, 0.286),
        rate(4.247, 0.267), rate(21.594, 0.897), rate(8.6735, 1.545)}},
  }};
  return data;
}

inline std::optional<MoleculeData> reference_molecule(std::string_view name) {
  for (const auto& m : reference_molecules())
    if (m.system.name == name) return m;
  return std::nullopt;
}

}  // namespace twospin

#endif  // TWOSPIN_REFERENCE_DATA_HPP_
