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

#ifndef TWOSPIN_EVOLUTION_HPP_
#define TWOSPIN_EVOLUTION_HPP_

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "twospin/channels.hpp"
#include "twospin/linalg.hpp"
#include "twospin/states.hpp"

namespace twospin {

/// exp(Z t) for the full generator of `params`.
struct Propagator {
  Superoperator superop;
  double t = 0.0;
  NoiseParams params;

  Mat4 apply(const Mat4& rho) const { return twospin::apply(superop, rho); }
};

inline Propagator make_propagator(const NoiseParams& params, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("propagate: t must be >= 0");
  const Mat16 zt = full_generator(params).matrix() * t;
  return Propagator{Superoperator(matrix_exp(zt)), t, params};
}

namespace detail {

inline DensityMatrix as_state(const Mat4& m) {
  // The flow is Hermiticity and trace preserving; remove round-off only (it
  // grows with the number of squarings in the exponential at long times).
  const Mat4 h = 0.5 * (m + m.adjoint());
  return DensityMatrix::from_matrix(h / h.trace().real());
}

}  // namespace detail

inline DensityMatrix propagate(const DensityMatrix& rho0, const Propagator& prop) {
  return detail::as_state(prop.apply(rho0.matrix()));
}

inline DensityMatrix propagate(const DensityMatrix& rho0, const NoiseParams& params, double t) {
  return propagate(rho0, make_propagator(params, t));
}

/// Thread-safe memo of propagators keyed by (params, t). Lookups take a shared
/// lock; the exponential is computed outside any lock.
class PropagatorCache {
 public:
  explicit PropagatorCache(std::size_t capacity = 4096) : capacity_(capacity) {}

  Propagator get(const NoiseParams& params, double t) {
    const Key key{params.gamma1, params.gamma2, params.gamma3, params.Gamma1,
                  params.Gamma2, params.nbar,   t};
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    Propagator prop = make_propagator(params, t);
    std::unique_lock lock(mutex_);
    if (entries_.size() >= capacity_) entries_.clear();
    entries_.emplace(key, prop);
    return prop;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

 private:
  using Key = std::tuple<double, double, double, double, double, double, double>;
  std::size_t capacity_;
  mutable std::shared_mutex mutex_;
  std::map<Key, Propagator> entries_;
};

/// Real symmetric two-spin state in the populations/coherences layout
///   [a1 b1 b2 b3; b1 a2 b4 b5; b2 b4 a3 b6; b3 b5 b6 a4].
struct AnalyticDecayState {
  std::array<double, 4> alpha{};
  std::array<double, 6> beta{};
  double t = 0.0;

  Mat4 matrix() const {
    Mat4 m = Mat4::Zero();
    static constexpr std::array<std::pair<int, int>, 6> pos{
        {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    for (int k = 0; k < 4; ++k) m(k, k) = alpha[static_cast<std::size_t>(k)];
    for (std::size_t k = 0; k < 6; ++k) {
      m(pos[k].first, pos[k].second) = beta[k];
      m(pos[k].second, pos[k].first) = beta[k];
    }
    return m;
  }

  DensityMatrix state() const { return DensityMatrix::from_matrix(matrix()); }
};

enum class MultipleQuantum { ZQ, DQ };

/// Decay rate of the ZQ (|01>+|10>) or DQ (|00>+|11>) coherence element.
inline double coherence_decay_rate(MultipleQuantum kind, const NoiseParams& p) {
  const double common = p.gamma1 + p.gamma2 + 0.5 * (p.Gamma1 + p.Gamma2);
  return kind == MultipleQuantum::ZQ ? common - p.gamma3 : common + p.gamma3;
}

namespace detail {

inline AnalyticDecayState analytic_mq(MultipleQuantum kind, const NoiseParams& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("analytic decay: t must be >= 0");
  const double pop = std::exp(-t * (p.Gamma1 + p.Gamma2));
  const double coh = 0.5 * std::exp(-t * coherence_decay_rate(kind, p));
  AnalyticDecayState s;
  s.t = t;
  const double outer = kind == MultipleQuantum::ZQ ? 0.25 * (1.0 - pop) : 0.25 * (1.0 + pop);
  const double inner = kind == MultipleQuantum::ZQ ? 0.25 * (1.0 + pop) : 0.25 * (1.0 - pop);
  s.alpha = {outer, inner, inner, outer};
  if (kind == MultipleQuantum::ZQ)
    s.beta[3] = coh;
  else
    s.beta[2] = coh;
  return s;
}

}  // namespace detail

/// Closed-form decay of the ZQ coherence state under the full generator.
inline AnalyticDecayState analytic_zq(const NoiseParams& p, double t) {
  return detail::analytic_mq(MultipleQuantum::ZQ, p, t);
}

/// Closed-form decay of the DQ coherence state under the full generator.
inline AnalyticDecayState analytic_dq(const NoiseParams& p, double t) {
  return detail::analytic_mq(MultipleQuantum::DQ, p, t);
}

/// `points` log-spaced times in [start, stop].
inline std::vector<double> log_grid(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop > start) || points < 2)
    throw std::invalid_argument("log_grid: need 0 < start < stop and points >= 2");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double a = std::log(start);
  const double b = std::log(stop);
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  out.front() = start;
  out.back() = stop;
  return out;
}

inline std::vector<double> default_time_grid() { return log_grid(1e-3, 10.0, 64); }

}  // namespace twospin

#endif  // TWOSPIN_EVOLUTION_HPP_
