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

#ifndef TWOSPIN_ESTIMATION_HPP_
#define TWOSPIN_ESTIMATION_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twospin/channels.hpp"
#include "twospin/error.hpp"
#include "twospin/evolution.hpp"
#include "twospin/least_squares.hpp"

namespace twospin {

enum class CurveKind { T1_spin1, T1_spin2, SQ1, SQ2, ZQ, DQ };

inline constexpr std::array<CurveKind, 6> kCurveKinds{CurveKind::T1_spin1, CurveKind::T1_spin2,
                                                      CurveKind::SQ1,      CurveKind::SQ2,
                                                      CurveKind::ZQ,       CurveKind::DQ};

inline std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::T1_spin1: return "T1_inversion_recovery_spin1";
    case CurveKind::T1_spin2: return "T1_inversion_recovery_spin2";
    case CurveKind::SQ1: return "SQ1";
    case CurveKind::SQ2: return "SQ2";
    case CurveKind::ZQ: return "ZQ";
    case CurveKind::DQ: return "DQ";
  }
  return "?";
}

/// Accepts the canonical names plus the short forms T1_1 / T1_2 (any case,
/// '-' and '_' interchangeable).
inline std::optional<CurveKind> parse_curve_kind(std::string_view name) {
  std::string norm;
  for (char c : name) norm.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  for (auto k : kCurveKinds) {
    std::string canon;
    for (char c : to_string(k)) canon.push_back(static_cast<char>(std::toupper(c)));
    if (norm == canon) return k;
  }
  if (norm == "T1_1" || norm == "T1_SPIN1") return CurveKind::T1_spin1;
  if (norm == "T1_2" || norm == "T1_SPIN2") return CurveKind::T1_spin2;
  return std::nullopt;
}

inline bool is_recovery(CurveKind k) { return k == CurveKind::T1_spin1 || k == CurveKind::T1_spin2; }

enum class TimeUnit { seconds, milliseconds };

inline double seconds_per(TimeUnit u) { return u == TimeUnit::milliseconds ? 1e-3 : 1.0; }

struct Sample {
  double t = 0.0;
  double signal = 0.0;
  std::optional<double> sigma;
};

struct DecayCurve {
  CurveKind kind = CurveKind::ZQ;
  std::vector<Sample> samples;
  TimeUnit unit = TimeUnit::seconds;

  bool weighted() const {
    return !samples.empty() &&
           std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.sigma.has_value(); });
  }
};

inline constexpr std::size_t kMinFitSamples = 4;

/// Throws DataError naming the first offending sample (1-based).
inline void validate(const DecayCurve& curve, std::size_t min_samples = 1) {
  const std::string kind(to_string(curve.kind));
  if (curve.samples.size() < min_samples)
    throw DataError(kind + " curve: need at least " + std::to_string(min_samples) + " samples, got " +
                    std::to_string(curve.samples.size()));
  const bool any_sigma = std::any_of(curve.samples.begin(), curve.samples.end(),
                                     [](const Sample& s) { return s.sigma.has_value(); });
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const Sample& s = curve.samples[i];
    const std::string where = kind + " curve sample " + std::to_string(i + 1);
    if (!std::isfinite(s.t) || !std::isfinite(s.signal)) throw DataError(where + ": non-finite value");
    if (s.t < 0.0) throw DataError(where + ": negative time");
    if (i > 0 && !(s.t > curve.samples[i - 1].t))
      throw DataError(where + ": times must be strictly increasing");
    if (any_sigma && !s.sigma) throw DataError(where + ": sigma missing while other rows have it");
    if (s.sigma && !(*s.sigma > 0.0 && std::isfinite(*s.sigma)))
      throw DataError(where + ": sigma must be positive");
  }
}

// --- signal models -----------------------------------------------------------

/// Coefficients c such that the kind's decay rate is c . (g1, g2, g3, G1, G2).
inline std::array<double, 5> rate_coefficients(CurveKind k) {
  switch (k) {
    case CurveKind::T1_spin1: return {0, 0, 0, 1, 0};
    case CurveKind::T1_spin2: return {0, 0, 0, 0, 1};
    case CurveKind::SQ1: return {1, 0, 0, 0, 0};
    case CurveKind::SQ2: return {0, 1, 0, 0, 0};
    case CurveKind::ZQ: return {1, 1, -1, 0.5, 0.5};
    case CurveKind::DQ: return {1, 1, 1, 0.5, 0.5};
  }
  return {};
}

inline std::array<double, 5> as_array(const NoiseParams& p) {
  return {p.gamma1, p.gamma2, p.gamma3, p.Gamma1, p.Gamma2};
}

inline double model_rate(CurveKind k, const NoiseParams& p) {
  const auto c = rate_coefficients(k);
  const auto v = as_array(p);
  double r = 0.0;
  for (std::size_t i = 0; i < 5; ++i) r += c[i] * v[i];
  return r;
}

/// Unit-amplitude shape: exp(-R t), or 1 - 2 exp(-R t) for inversion recovery.
inline double unit_signal(CurveKind k, double rate, double t) {
  const double e = std::exp(-rate * t);
  return is_recovery(k) ? 1.0 - 2.0 * e : e;
}

/// d unit_signal / d rate.
inline double unit_signal_drate(CurveKind k, double rate, double t) {
  const double e = std::exp(-rate * t);
  return is_recovery(k) ? 2.0 * t * e : -t * e;
}

inline double signal_model(CurveKind k, const NoiseParams& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("signal_model: t must be >= 0");
  return unit_signal(k, model_rate(k, p), t);
}

// --- single-curve fit ----------------------------------------------------------

struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  double residual_norm = 0.0;
  double amplitude = 1.0;
  int iterations = 0;
};

struct FitOptions {
  LeastSquaresOptions solver{};
  bool throw_on_nonconvergence = true;
};

namespace detail {

inline constexpr double kMinRateGuess = 1e-4;
inline constexpr double kMaxRateGuess = 1e3;

inline double clamp_rate(double r) {
  if (!std::isfinite(r)) return 1.0;
  return std::clamp(r, kMinRateGuess, kMaxRateGuess);
}

/// Decaying part y(t) = exp(-R t) implied by a sample, given amplitude a.
inline double decaying_part(CurveKind k, double signal, double a) {
  return is_recovery(k) ? (a - signal) / (2.0 * a) : signal / a;
}

inline double recovery_amplitude_guess(const DecayCurve& c) {
  const double last = c.samples.back().signal;
  double peak = 0.0;
  for (const auto& s : c.samples) peak = std::max(peak, std::abs(s.signal));
  return std::abs(last) > 0.5 * peak ? last : (last >= 0 ? peak : -peak);
}

/// Rate from the first two samples, the documented default start point.
inline double two_point_rate_guess(const DecayCurve& c, double a) {
  const auto& s0 = c.samples[0];
  const auto& s1 = c.samples[1];
  const double y0 = decaying_part(c.kind, s0.signal, a);
  const double y1 = decaying_part(c.kind, s1.signal, a);
  if (!(y0 > 0.0) || !(y1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(y0 / y1) / (s1.t - s0.t);
}

/// Log-linear regression over all samples with a positive decaying part.
inline double regression_rate_guess(const DecayCurve& c, double a) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& s : c.samples) {
    const double y = decaying_part(c.kind, s.signal, a);
    if (!(y > 0.0)) continue;
    const double ly = std::log(y);
    sx += s.t;
    sy += ly;
    sxx += s.t * s.t;
    sxy += s.t * ly;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return -(n * sxy - sx * sy) / den;
}

inline double weight(const Sample& s) { return s.sigma ? 1.0 / *s.sigma : 1.0; }

inline LeastSquaresResult fit_amplitude_rate(const DecayCurve& c, double a0, double r0,
                                             const LeastSquaresOptions& opts) {
  const auto m = static_cast<Eigen::Index>(c.samples.size());
  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    r.resize(m);
    j.resize(m, 2);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Sample& s = c.samples[static_cast<std::size_t>(i)];
      const double w = weight(s);
      const double shape = unit_signal(c.kind, x(1), s.t);
      r(i) = w * (x(0) * shape - s.signal);
      j(i, 0) = w * shape;
      j(i, 1) = w * x(0) * unit_signal_drate(c.kind, x(1), s.t);
    }
  };
  Eigen::VectorXd x0(2);
  x0 << a0, r0;
  return levenberg_marquardt(residual, x0, opts);
}

inline double residual_variance(const LeastSquaresResult& res, bool weighted) {
  if (weighted) return 1.0;
  const auto dof = res.residuals.size() - res.x.size();
  return dof > 0 ? 2.0 * res.cost / static_cast<double>(dof) : 0.0;
}

}  // namespace detail

/// Weighted least-squares fit of A exp(-R t) (coherences) or A (1 - 2 exp(-R t))
/// (inversion recovery).
inline RateEstimate fit_exponential(const DecayCurve& curve, const FitOptions& opts = {}) {
  validate(curve, kMinFitSamples);
  double lo = curve.samples.front().signal, hi = lo;
  for (const auto& s : curve.samples) {
    lo = std::min(lo, s.signal);
    hi = std::max(hi, s.signal);
  }
  if (hi - lo <= 1e-14 * std::max(std::abs(hi), std::abs(lo)))
    throw DataError(std::string(to_string(curve.kind)) + " curve: constant signal, rate undefined");

  double a0 = 0.0;
  if (is_recovery(curve.kind)) {
    a0 = detail::recovery_amplitude_guess(curve);
  } else {
    a0 = curve.samples.front().signal;
  }
  if (a0 == 0.0) a0 = hi != 0.0 ? hi : lo;
  double r0 = detail::two_point_rate_guess(curve, a0);
  if (!std::isfinite(r0)) r0 = detail::regression_rate_guess(curve, a0);
  r0 = detail::clamp_rate(r0);
  if (!is_recovery(curve.kind)) a0 = curve.samples.front().signal * std::exp(r0 * curve.samples.front().t);

  LeastSquaresResult res = detail::fit_amplitude_rate(curve, a0, r0, opts.solver);
  if (!res.converged()) {
    const double r1 = detail::clamp_rate(detail::regression_rate_guess(curve, a0));
    LeastSquaresResult retry = detail::fit_amplitude_rate(curve, a0, r1, opts.solver);
    if (retry.converged() || retry.cost < res.cost) res = retry;
  }
  if (!res.converged() && opts.throw_on_nonconvergence)
    throw ConvergenceError(std::string(to_string(curve.kind)) + " curve: exponential fit did not converge in " +
                           std::to_string(res.iterations) + " iterations");

  const double variance = detail::residual_variance(res, curve.weighted());
  const Eigen::MatrixXd cov = covariance(res.jacobian, variance);
  const double scale = seconds_per(curve.unit);
  RateEstimate out;
  out.rate = res.x(1) / scale;
  out.std_error = std::sqrt(std::max(cov(1, 1), 0.0)) / scale;
  out.amplitude = res.x(0);
  out.residual_norm = res.residuals.norm();
  out.iterations = res.iterations;
  return out;
}

/// gamma3 = (R_DQ - R_ZQ) / 2 with the standard errors combined in quadrature.
inline RateEstimate gamma3_difference(const RateEstimate& zq, const RateEstimate& dq) {
  if (!std::isfinite(zq.rate) || !std::isfinite(dq.rate))
    throw std::invalid_argument("gamma3_difference: rates must be finite");
  RateEstimate out;
  out.rate = 0.5 * (dq.rate - zq.rate);
  out.std_error = 0.5 * std::hypot(dq.std_error, zq.std_error);
  out.residual_norm = std::hypot(dq.residual_norm, zq.residual_norm);
  out.amplitude = 1.0;
  return out;
}

// --- model consistency ----------------------------------------------------------

/// Measured ZQ/DQ rates against the rates the full generator predicts from the
/// independently measured gamma1, gamma2, Gamma1, Gamma2 and a gamma3 estimate.
/// Residuals are measured minus predicted.
struct ModelConsistency {
  double gamma3 = 0.0;
  double measured_zq = 0.0;
  double measured_dq = 0.0;
  double predicted_zq = 0.0;
  double predicted_dq = 0.0;
  double residual_zq = 0.0;
  double residual_dq = 0.0;
  /// (R_ZQ + R_DQ)/2 - (gamma1 + gamma2 + (Gamma1 + Gamma2)/2): the part of the
  /// measured multiple-quantum decay no choice of gamma3 can explain.
  double common_mode_mismatch = 0.0;
};

inline ModelConsistency model_consistency(double measured_zq, double measured_dq,
                                          const NoiseParams& independent, double gamma3) {
  NoiseParams p = independent;
  p.gamma3 = gamma3;
  ModelConsistency c;
  c.gamma3 = gamma3;
  c.measured_zq = measured_zq;
  c.measured_dq = measured_dq;
  c.predicted_zq = coherence_decay_rate(MultipleQuantum::ZQ, p);
  c.predicted_dq = coherence_decay_rate(MultipleQuantum::DQ, p);
  c.residual_zq = measured_zq - c.predicted_zq;
  c.residual_dq = measured_dq - c.predicted_dq;
  c.common_mode_mismatch = 0.5 * (measured_zq + measured_dq) -
                           (p.gamma1 + p.gamma2 + 0.5 * (p.Gamma1 + p.Gamma2));
  return c;
}

// --- joint fit -----------------------------------------------------------------

enum class FitMode { difference, joint };

struct CurveResidual {
  CurveKind kind;
  double residual_norm = 0.0;
  double amplitude = 1.0;
  std::size_t samples = 0;
};

struct FitReport {
  FitMode mode = FitMode::joint;
  NoiseParams params;
  NoiseParams stderrs;          // per-parameter standard errors (nbar unused)
  std::array<bool, 5> fitted{};  // gamma1, gamma2, gamma3, Gamma1, Gamma2
  std::vector<CurveResidual> per_curve;
  std::map<CurveKind, RateEstimate> single_curve_rates;
  std::optional<ModelConsistency> consistency;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  double cost = 0.0;
  std::optional<bool> completely_positive;  // unknown when some rates were neither fitted nor supplied
};

namespace detail {

inline const DecayCurve* find_curve(std::span<const DecayCurve> curves, CurveKind k) {
  const DecayCurve* found = nullptr;
  for (const auto& c : curves)
    if (c.kind == k) {
      if (found) throw DataError("duplicate " + std::string(to_string(k)) + " curve");
      found = &c;
    }
  return found;
}

/// The curve that identifies each parameter when present.
inline constexpr std::array<std::optional<CurveKind>, 5> kIdentifyingCurve{
    CurveKind::SQ1, CurveKind::SQ2, std::nullopt, CurveKind::T1_spin1, CurveKind::T1_spin2};

inline const char* param_name(std::size_t i) {
  static constexpr const char* names[5] = {"gamma1", "gamma2", "gamma3", "Gamma1", "Gamma2"};
  return names[i];
}

inline NoiseParams from_array(const std::array<double, 5>& v, double nbar) {
  NoiseParams p;
  p.gamma1 = v[0];
  p.gamma2 = v[1];
  p.gamma3 = v[2];
  p.Gamma1 = v[3];
  p.Gamma2 = v[4];
  p.nbar = nbar;
  return p;
}

}  // namespace detail

/// Joint weighted least squares of the noise rates over all supplied curves.
///
/// ZQ and DQ are required. gamma1, gamma2, Gamma1 and Gamma2 are fitted when
/// their identifying curve (SQ1, SQ2, T1 spin 1, T1 spin 2) is present and
/// taken from `fixed` otherwise. Non-negative rates are parameterized as
/// squares; gamma3 is unconstrained. Each curve carries a free amplitude.
inline FitReport fit_noise_model(std::span<const DecayCurve> curves,
                                 const std::optional<NoiseParams>& fixed = std::nullopt,
                                 const FitOptions& opts = {}) {
  for (auto required : {CurveKind::ZQ, CurveKind::DQ})
    if (!detail::find_curve(curves, required))
      throw DataError("joint fit: missing required " + std::string(to_string(required)) + " curve");
  for (const auto& c : curves) {
    validate(c, kMinFitSamples);
    if (c.unit != curves.front().unit)
      throw DataError("joint fit: inconsistent time units across curves");
  }
  const double tscale = seconds_per(curves.front().unit);

  FitReport report;
  report.mode = FitMode::joint;
  for (const auto& c : curves) report.single_curve_rates[c.kind] = fit_exponential(c, opts);

  std::array<double, 5> start{};
  std::array<bool, 5> free{};
  for (std::size_t i = 0; i < 5; ++i) {
    if (i == 2) continue;
    const auto& ident = detail::kIdentifyingCurve[i];
    if (detail::find_curve(curves, *ident)) {
      free[i] = true;
      start[i] = report.single_curve_rates.at(*ident).rate;
    } else if (fixed) {
      start[i] = as_array(*fixed)[i];
    } else {
      throw DataError(std::string("joint fit: no ") + std::string(to_string(*ident)) + " curve and no fixed " +
                      detail::param_name(i) + " supplied");
    }
  }
  free[2] = true;
  start[2] = 0.5 * (report.single_curve_rates.at(CurveKind::DQ).rate -
                    report.single_curve_rates.at(CurveKind::ZQ).rate);
  report.fitted = free;

  // Unknown vector: [free rate parameters..., amplitude per curve...]. Square
  // roots for non-negative rates, gamma3 as is.
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < 5; ++i)
    if (free[i]) free_idx.push_back(i);
  const auto n_rates = static_cast<Eigen::Index>(free_idx.size());
  const auto n_curves = static_cast<Eigen::Index>(curves.size());
  Eigen::VectorXd x0(n_rates + n_curves);
  for (Eigen::Index k = 0; k < n_rates; ++k) {
    const std::size_t i = free_idx[static_cast<std::size_t>(k)];
    x0(k) = i == 2 ? start[i] * tscale : std::sqrt(std::max(start[i] * tscale, detail::kMinRateGuess));
  }
  for (Eigen::Index c = 0; c < n_curves; ++c)
    x0(n_rates + c) = report.single_curve_rates.at(curves[static_cast<std::size_t>(c)].kind).amplitude;

  std::array<double, 5> fixed_scaled{};
  for (std::size_t i = 0; i < 5; ++i) fixed_scaled[i] = start[i] * tscale;

  auto unpack = [&](const Eigen::VectorXd& x, std::array<double, 5>& rates, std::array<double, 5>& drates) {
    rates = fixed_scaled;
    drates.fill(0.0);
    for (Eigen::Index k = 0; k < n_rates; ++k) {
      const std::size_t i = free_idx[static_cast<std::size_t>(k)];
      rates[i] = i == 2 ? x(k) : x(k) * x(k);
      drates[i] = i == 2 ? 1.0 : 2.0 * x(k);
    }
  };

  Eigen::Index total = 0;
  for (const auto& c : curves) total += static_cast<Eigen::Index>(c.samples.size());

  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& j) {
    std::array<double, 5> rates{}, drates{};
    unpack(x, rates, drates);
    r.resize(total);
    j.setZero(total, x.size());
    Eigen::Index row = 0;
    for (Eigen::Index ci = 0; ci < n_curves; ++ci) {
      const DecayCurve& c = curves[static_cast<std::size_t>(ci)];
      const auto coef = rate_coefficients(c.kind);
      double rate = 0.0;
      for (std::size_t i = 0; i < 5; ++i) rate += coef[i] * rates[i];
      const double amp = x(n_rates + ci);
      for (const Sample& s : c.samples) {
        const double w = detail::weight(s);
        const double shape = unit_signal(c.kind, rate, s.t);
        const double dshape = unit_signal_drate(c.kind, rate, s.t);
        r(row) = w * (amp * shape - s.signal);
        for (Eigen::Index k = 0; k < n_rates; ++k) {
          const std::size_t i = free_idx[static_cast<std::size_t>(k)];
          j(row, k) = w * amp * dshape * coef[i] * drates[i];
        }
        j(row, n_rates + ci) = w * shape;
        ++row;
      }
    }
  };

  const LeastSquaresResult res = levenberg_marquardt(residual, x0, opts.solver);
  report.converged = res.converged();
  report.iterations = res.iterations;
  report.gradient_norm = res.gradient_norm;
  report.cost = res.cost;
  if (!report.converged && opts.throw_on_nonconvergence)
    throw ConvergenceError("joint fit did not converge in " + std::to_string(res.iterations) + " iterations");

  std::array<double, 5> rates{}, drates{};
  unpack(res.x, rates, drates);
  const bool all_weighted =
      std::all_of(curves.begin(), curves.end(), [](const DecayCurve& c) { return c.weighted(); });
  const Eigen::MatrixXd cov = covariance(res.jacobian, detail::residual_variance(res, all_weighted));
  std::array<double, 5> errs{};
  for (Eigen::Index k = 0; k < n_rates; ++k) {
    const std::size_t i = free_idx[static_cast<std::size_t>(k)];
    errs[i] = std::abs(drates[i]) * std::sqrt(std::max(cov(k, k), 0.0)) / tscale;
  }
  for (auto& v : rates) v /= tscale;
  const double nbar = fixed ? fixed->nbar : 0.5;
  report.params = detail::from_array(rates, nbar);
  report.stderrs = detail::from_array(errs, 0.0);
  report.completely_positive = report.params.completely_positive();

  Eigen::Index row = 0;
  for (Eigen::Index ci = 0; ci < n_curves; ++ci) {
    const DecayCurve& c = curves[static_cast<std::size_t>(ci)];
    const auto n = static_cast<Eigen::Index>(c.samples.size());
    report.per_curve.push_back(
        {c.kind, res.residuals.segment(row, n).norm(), res.x(n_rates + ci), c.samples.size()});
    row += n;
  }

  report.consistency = model_consistency(report.single_curve_rates.at(CurveKind::ZQ).rate,
                                         report.single_curve_rates.at(CurveKind::DQ).rate,
                                         report.params, report.params.gamma3);
  return report;
}

/// Difference-mode report: gamma3 from the ZQ/DQ single-exponential fits, the
/// other rates from their own curves when present or from `independent`.
inline FitReport fit_difference(std::span<const DecayCurve> curves,
                                const std::optional<NoiseParams>& independent = std::nullopt,
                                const FitOptions& opts = {}) {
  FitReport report;
  report.mode = FitMode::difference;
  for (auto required : {CurveKind::ZQ, CurveKind::DQ})
    if (!detail::find_curve(curves, required))
      throw DataError("difference fit: missing required " + std::string(to_string(required)) + " curve");
  for (const auto& c : curves) {
    const RateEstimate r = fit_exponential(c, opts);
    report.single_curve_rates[c.kind] = r;
    report.per_curve.push_back({c.kind, r.residual_norm, r.amplitude, c.samples.size()});
    report.iterations = std::max(report.iterations, r.iterations);
  }
  const RateEstimate g3 = gamma3_difference(report.single_curve_rates.at(CurveKind::ZQ),
                                            report.single_curve_rates.at(CurveKind::DQ));
  std::array<double, 5> rates{}, errs{};
  bool have_all = true;
  for (std::size_t i = 0; i < 5; ++i) {
    if (i == 2) continue;
    const CurveKind ident = *detail::kIdentifyingCurve[i];
    if (auto it = report.single_curve_rates.find(ident); it != report.single_curve_rates.end()) {
      rates[i] = it->second.rate;
      errs[i] = it->second.std_error;
      report.fitted[i] = true;
    } else if (independent) {
      rates[i] = as_array(*independent)[i];
    } else {
      have_all = false;
    }
  }
  rates[2] = g3.rate;
  errs[2] = g3.std_error;
  report.fitted[2] = true;
  report.params = detail::from_array(rates, independent ? independent->nbar : 0.5);
  report.stderrs = detail::from_array(errs, 0.0);
  report.converged = true;
  if (have_all) report.completely_positive = report.params.completely_positive();
  if (have_all)
    report.consistency = model_consistency(report.single_curve_rates.at(CurveKind::ZQ).rate,
                                           report.single_curve_rates.at(CurveKind::DQ).rate,
                                           report.params, g3.rate);
  return report;
}

}  // namespace twospin

#endif  // TWOSPIN_ESTIMATION_HPP_
