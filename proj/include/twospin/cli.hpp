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

#ifndef TWOSPIN_CLI_HPP_
#define TWOSPIN_CLI_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twospin/channels.hpp"
#include "twospin/error.hpp"
#include "twospin/estimation.hpp"
#include "twospin/evolution.hpp"
#include "twospin/io.hpp"
#include "twospin/reference_data.hpp"
#include "twospin/spinops.hpp"
#include "twospin/states.hpp"
#include "twospin/svg.hpp"
#include "twospin/tomography.hpp"

namespace twospin::cli {

struct RunConfig {
  SpinSystem system;
  double nu_rf = 0.0;
  NoiseParams noise;
  double epsilon = 1.0;
  std::vector<double> time_grid;
  std::uint64_t seed = 0;
  double readout_noise = 0.0;  // Gaussian sigma added to simulated tomography observables
  std::string out;             // output directory; empty means stdout
  std::vector<std::string> warnings;
};

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
  return v.get<double>();
}

inline SpinSystem system_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    auto p = spin_system_preset(j.get<std::string>());
    if (!p) throw ConfigError("system: unknown preset '" + j.get<std::string>() +
                              "' (expected btc, cytosine or coumarin)");
    return *p;
  }
  if (!j.is_object()) throw ConfigError("system: expected a preset name or an object");
  SpinSystem s;
  for (const char* key : {"nu1", "nu2", "j12"})
    if (!j.contains(key)) throw ConfigError(std::string("system.") + key + ": missing");
  s.name = j.value("name", std::string("custom"));
  s.nu1 = number_field(j, "nu1");
  s.nu2 = number_field(j, "nu2");
  s.j12 = number_field(j, "j12");
  return s;
}

inline std::vector<double> grid_from_json(const nlohmann::json& j) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError("time_grid: entries must be numbers");
      grid.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    const double start = number_field(j, "start");
    const double stop = number_field(j, "stop");
    if (!j.at("points").is_number_integer()) throw ConfigError("time_grid.points: expected an integer");
    const int points = j.at("points").get<int>();
    const std::string spacing = j.value("spacing", std::string("log"));
    if (points < 2) throw ConfigError("time_grid.points: need at least 2");
    if (spacing == "log") {
      if (!(start > 0.0 && stop > start)) throw ConfigError("time_grid: log spacing needs 0 < start < stop");
      grid = log_grid(start, stop, points);
    } else if (spacing == "linear") {
      for (int i = 0; i < points; ++i) grid.push_back(start + (stop - start) * i / (points - 1));
    } else {
      throw ConfigError("time_grid.spacing: expected 'log' or 'linear'");
    }
  } else {
    throw ConfigError("time_grid: expected an array or an object");
  }
  if (grid.empty()) throw ConfigError("time_grid: empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) throw ConfigError("time_grid: times must be finite and >= 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("time_grid: times must be strictly increasing");
  }
  return grid;
}

}  // namespace detail

/// Builds a RunConfig from parsed JSON (may be null) and an optional preset
/// name that overrides the config's system. A preset also supplies its
/// published rates as the default noise model.
inline RunConfig make_config(const nlohmann::json& j, const std::optional<std::string>& preset) {
  static const std::vector<std::string> known{"system", "nu_rf", "noise", "epsilon", "time_grid",
                                              "seed",   "readout_noise", "out"};
  if (!j.is_null() && !j.is_object()) throw ConfigError("config: expected a JSON object");
  if (j.is_object())
    for (const auto& [key, _] : j.items())
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw ConfigError("config: unknown field '" + key + "'");

  RunConfig c;
  std::optional<std::string> preset_name = preset;
  if (preset) {
    auto p = spin_system_preset(*preset);
    if (!p) throw ConfigError("--preset: unknown preset '" + *preset + "' (expected btc, cytosine or coumarin)");
    c.system = *p;
  } else if (j.is_object() && j.contains("system")) {
    c.system = detail::system_from_json(j["system"]);
    if (j["system"].is_string()) preset_name = j["system"].get<std::string>();
  } else {
    throw ConfigError("system: missing (give --preset or a 'system' field)");
  }
  if (!(c.system.nu1 != c.system.nu2)) throw ConfigError("system: nu1 and nu2 must differ");
  if (!c.system.weakly_coupled())
    c.warnings.push_back("system '" + c.system.name + "' is not weakly coupled (|nu1 - nu2| < 10 J)");

  c.nu_rf = default_nu_rf(c.system);
  if (preset_name)
    if (auto ref = reference_molecule(*preset_name)) c.noise = ref->rates.noise();

  if (j.is_object()) {
    try {
      if (j.contains("nu_rf")) c.nu_rf = detail::number_field(j, "nu_rf");
      if (j.contains("noise")) c.noise = noise_from_json(j["noise"]);
      if (j.contains("epsilon")) c.epsilon = detail::number_field(j, "epsilon");
      if (j.contains("time_grid")) c.time_grid = detail::grid_from_json(j["time_grid"]);
      if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0)
          throw ConfigError("seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
      }
      if (j.contains("readout_noise")) c.readout_noise = detail::number_field(j, "readout_noise");
      if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("out: expected a string");
        c.out = j["out"].get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (c.time_grid.empty()) c.time_grid = default_time_grid();
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) throw ConfigError("epsilon: must be in [0, 1]");
  if (!(c.readout_noise >= 0.0)) throw ConfigError("readout_noise: must be >= 0");
  try {
    validate(c.noise);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!c.noise.completely_positive())
    c.warnings.push_back("noise: |gamma3| > 2 sqrt(gamma1 gamma2); the generator is not completely positive");
  return c;
}

inline RunConfig load_config(const std::optional<std::string>& path, const std::optional<std::string>& preset) {
  nlohmann::json j;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError(*path + ": cannot open config");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(*path + ": " + e.what());
    }
  }
  return make_config(j, preset);
}

inline std::optional<CoherenceKind> parse_coherence_kind(const std::string& s) {
  for (auto k : {CoherenceKind::ZQ, CoherenceKind::DQ, CoherenceKind::SQ1, CoherenceKind::SQ2})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// (1 - epsilon) I/4 + epsilon |target><target|.
inline DensityMatrix ideal_target(CoherenceKind target, double epsilon) {
  const Mat4 pure = coherence_state(target).matrix();
  return DensityMatrix::from_matrix((1.0 - epsilon) * 0.25 * Mat4::Identity() + epsilon * pure);
}

// --- prepare / tomo -------------------------------------------------------------

struct TomographyReport {
  CoherenceKind target;
  DensityMatrix prepared;
  std::vector<TomographyRecord> records;
  DensityMatrix reconstructed;
  double fidelity = 0.0;
  double reconstruction_residual = 0.0;
  std::vector<std::string> warnings;
};

inline std::vector<TomographyRecord> noisy_readouts(const DensityMatrix& rho, double sigma, std::uint64_t seed) {
  auto records = simulate_all_readouts(rho);
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& r : records)
      for (auto& v : r.observables) v = std::clamp(v + noise(rng), -1.0, 1.0);
  }
  return records;
}

inline TomographyReport finish_tomography(CoherenceKind target, const DensityMatrix& prepared,
                                          std::vector<TomographyRecord> records, double epsilon,
                                          std::vector<std::string> warnings) {
  const Reconstruction raw = reconstruct_raw(records);
  const DensityMatrix rec = reconstruct(records);
  const DensityMatrix ideal = ideal_target(target, epsilon);
  if (epsilon == 0.0)
    warnings.push_back("epsilon = 0: the deviation part is empty; fidelity is against I/4");
  return {target, prepared, std::move(records), rec, fidelity(ideal, rec), raw.residual_norm, std::move(warnings)};
}

/// Prepares the target with ideal pulses, tomographs it, and compares against
/// the ideal pseudopure target.
inline TomographyReport cmd_prepare(const RunConfig& c, CoherenceKind target) {
  const DensityMatrix prepared = prepare(target, c.system, c.epsilon, c.nu_rf);
  return finish_tomography(target, prepared, noisy_readouts(prepared, c.readout_noise, c.seed), c.epsilon,
                           c.warnings);
}

/// Reads records JSON: {"II": [8 numbers], "IX": [...], "IY": [...], "XX": [...]}.
inline std::vector<TomographyRecord> records_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("records: expected an object keyed by setting");
  std::vector<TomographyRecord> out;
  for (const auto& [key, value] : j.items()) {
    auto s = parse_readout_setting(key);
    if (!s) throw DataError("records: unknown setting '" + key + "'");
    if (!value.is_array() || value.size() != kObservablesPerSetting)
      throw DataError("records." + key + ": expected 8 numbers");
    TomographyRecord r;
    r.setting = *s;
    for (std::size_t i = 0; i < kObservablesPerSetting; ++i) {
      if (!value[i].is_number()) throw DataError("records." + key + ": expected numbers");
      r.observables[i] = value[i].get<double>();
    }
    out.push_back(r);
  }
  return out;
}

inline nlohmann::ordered_json records_to_json(const std::vector<TomographyRecord>& records) {
  nlohmann::ordered_json j;
  for (const auto& r : records) j[std::string(to_string(r.setting))] = r.observables;
  return j;
}

inline TomographyReport cmd_tomo(const RunConfig& c, CoherenceKind target,
                                 const std::optional<std::string>& records_path) {
  if (!records_path) return cmd_prepare(c, target);
  std::ifstream in(*records_path);
  if (!in) throw DataError(*records_path + ": cannot open records file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(*records_path + ": " + e.what());
  }
  auto records = records_from_json(j);
  const DensityMatrix placeholder = DensityMatrix::maximally_mixed();
  TomographyReport r = finish_tomography(target, placeholder, std::move(records), c.epsilon, c.warnings);
  r.prepared = r.reconstructed;
  return r;
}

inline nlohmann::ordered_json to_json(const TomographyReport& r, const RunConfig& c, bool include_prepared) {
  nlohmann::ordered_json j;
  j["target"] = to_string(r.target);
  j["system"] = c.system.name;
  j["epsilon"] = c.epsilon;
  if (include_prepared) j["prepared"] = twospin::to_json(r.prepared.matrix());
  j["records"] = records_to_json(r.records);
  j["reconstructed"] = twospin::to_json(r.reconstructed.matrix());
  j["reconstruction_residual"] = r.reconstruction_residual;
  j["fidelity"] = r.fidelity;
  j["warnings"] = r.warnings;
  return j;
}

// --- decay ---------------------------------------------------------------------

namespace detail {

/// Observable tracked for each curve kind, relative to its t = 0 value.
inline cplx characteristic_signal(CurveKind k, const Mat4& rho) {
  switch (k) {
    case CurveKind::ZQ: return rho(1, 2);
    case CurveKind::DQ: return rho(0, 3);
    case CurveKind::SQ1: return rho(0, 2) + rho(1, 3);
    case CurveKind::SQ2: return rho(0, 1) + rho(2, 3);
    case CurveKind::T1_spin1: return (rho * pauli(Spin::one, Axis::z)).trace();
    case CurveKind::T1_spin2: return (rho * pauli(Spin::two, Axis::z)).trace();
  }
  return 0.0;
}

}  // namespace detail

/// Sweeps the time grid under the full generator. A t = 0 row is prepended
/// when the grid does not start at 0.
///
/// Coherence kinds start from the prepared state and report the magnitude of
/// the kind's element (spin-summed transverse magnetization for SQ). Inversion
/// recovery starts from the thermal state with spin i inverted; the displacement
/// from equilibrium relaxes under the generator and the signal is <sigma_z,i>
/// normalized to its equilibrium value.
inline DecayCurve cmd_decay(const RunConfig& c, CurveKind kind, PropagatorCache* cache = nullptr) {
  if (c.epsilon == 0.0) throw ConfigError("epsilon = 0: no deviation signal to follow");
  PropagatorCache local;
  PropagatorCache& props = cache ? *cache : local;

  std::vector<double> grid = c.time_grid;
  if (grid.front() > 0.0) grid.insert(grid.begin(), 0.0);

  DecayCurve curve;
  curve.kind = kind;
  if (is_recovery(kind)) {
    const Spin spin = kind == CurveKind::T1_spin1 ? Spin::one : Spin::two;
    const DensityMatrix eq = thermal_state(c.epsilon);
    const Unitary invert = pulse(kPi, PulsePhase::y, spin == Spin::one ? PulseTarget::spin1 : PulseTarget::spin2);
    const Mat4 displacement = invert.conjugate(eq.matrix()) - eq.matrix();
    const double ref = detail::characteristic_signal(kind, eq.matrix()).real();
    for (double t : grid) {
      const Mat4 rho = eq.matrix() + props.get(c.noise, t).apply(displacement);
      curve.samples.push_back({t, t == 0.0 ? -1.0 : detail::characteristic_signal(kind, rho).real() / ref, {}});
    }
    return curve;
  }

  CoherenceKind prep = CoherenceKind::ZQ;
  switch (kind) {
    case CurveKind::ZQ: prep = CoherenceKind::ZQ; break;
    case CurveKind::DQ: prep = CoherenceKind::DQ; break;
    case CurveKind::SQ1: prep = CoherenceKind::SQ1; break;
    case CurveKind::SQ2: prep = CoherenceKind::SQ2; break;
    default: break;
  }
  const DensityMatrix rho0 = prepare(prep, c.system, c.epsilon, c.nu_rf);
  const double ref = std::abs(detail::characteristic_signal(kind, rho0.matrix()));
  if (!(ref > 0.0)) throw ConfigError("prepared state carries no " + std::string(to_string(kind)) + " signal");
  for (double t : grid) {
    const double s = t == 0.0 ? 1.0
                              : std::abs(detail::characteristic_signal(kind, props.get(c.noise, t).apply(rho0.matrix()))) / ref;
    curve.samples.push_back({t, s, {}});
  }
  return curve;
}

inline std::string curve_to_csv(const DecayCurve& curve) {
  std::ostringstream out;
  write_curve_csv(out, curve);
  return out.str();
}

inline nlohmann::ordered_json curve_to_json(const DecayCurve& curve) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(curve.kind);
  auto t = nlohmann::ordered_json::array();
  auto s = nlohmann::ordered_json::array();
  for (const auto& p : curve.samples) {
    t.push_back(p.t);
    s.push_back(p.signal);
  }
  j["t"] = t;
  j["signal"] = s;
  return j;
}

// --- fit -----------------------------------------------------------------------

struct FitOutput {
  FitReport report;
  std::string svg;
};

/// Log-linear overlay of the decaying part of every curve and its fitted model.
inline std::string fit_plot(const std::vector<DecayCurve>& curves, const FitReport& report) {
  static const char* colors[6] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
  SvgPlot plot("Decay fits (" + std::string(to_string(report.mode)) + ")", "t (s)", "normalized decay");
  std::size_t ci = 0;
  for (const auto& c : curves) {
    const std::string color = colors[ci++ % 6];
    double amp = 1.0;
    for (const auto& pc : report.per_curve)
      if (pc.kind == c.kind) amp = pc.amplitude;
    const double rate = report.mode == FitMode::joint ? model_rate(c.kind, report.params)
                                                      : report.single_curve_rates.at(c.kind).rate;
    const double scale = seconds_per(c.unit);
    SvgPlot::Series data{std::string(to_string(c.kind)), {}, SvgPlot::Style::markers, color};
    SvgPlot::Series model{std::string(to_string(c.kind)) + " fit", {}, SvgPlot::Style::line, color};
    for (const auto& s : c.samples) {
      const double t = s.t * scale;
      data.points.emplace_back(t, twospin::detail::decaying_part(c.kind, s.signal, amp));
    }
    const double tmax = c.samples.back().t * scale;
    const double tmin = c.samples.front().t * scale;
    for (int k = 0; k <= 100; ++k) {
      const double t = tmin + (tmax - tmin) * k / 100.0;
      model.points.emplace_back(t, std::exp(-rate * t));
    }
    plot.add(std::move(data));
    plot.add(std::move(model));
  }
  return plot.render();
}

/// `fixed` supplies rates for kinds without a curve (joint) or for the
/// consistency diagnostic (difference).
inline FitOutput cmd_fit(const std::map<CurveKind, std::string>& paths, FitMode mode,
                         const std::optional<NoiseParams>& fixed) {
  for (auto required : {CurveKind::ZQ, CurveKind::DQ})
    if (!paths.count(required))
      throw DataError("fit: missing " + std::string(to_string(required)) + " curve file");
  std::vector<DecayCurve> curves;
  for (const auto& [kind, path] : paths) curves.push_back(load_curve(path, kind));
  FitReport report = mode == FitMode::joint ? fit_noise_model(curves, fixed) : fit_difference(curves, fixed);
  std::string svg = fit_plot(curves, report);
  return {std::move(report), std::move(svg)};
}

// --- report --------------------------------------------------------------------

/// Correlated dephasing rate for each bundled molecule from its published
/// ZQ/DQ rates, with the model-consistency residuals.
inline nlohmann::ordered_json cmd_report(const std::vector<std::string>& molecules) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& name : molecules) {
    auto m = reference_molecule(name);
    if (!m) throw ConfigError("report: unknown molecule '" + name + "'");
    const auto& r = m->rates;
    const RateEstimate g3 = gamma3_difference(r.zq, r.dq);
    const ModelConsistency mc = model_consistency(r.zq.rate, r.dq.rate, r.noise(), g3.rate);
    NoiseParams p = r.noise();
    p.gamma3 = g3.rate;
    nlohmann::ordered_json j;
    j["molecule"] = name;
    j["nu1"] = m->system.nu1;
    j["nu2"] = m->system.nu2;
    j["j12"] = m->system.j12;
    j["rate_ZQ"] = r.zq.rate;
    j["rate_DQ"] = r.dq.rate;
    j["gamma3"] = g3.rate;
    j["gamma3_stderr"] = g3.std_error;
    j["gamma3_tabulated"] = r.gamma3.rate;
    j["gamma3_tabulated_stderr"] = r.gamma3.std_error;
    j["consistency_predicted_zq"] = mc.predicted_zq;
    j["consistency_predicted_dq"] = mc.predicted_dq;
    j["consistency_residual_zq"] = mc.residual_zq;
    j["consistency_residual_dq"] = mc.residual_dq;
    j["consistency_common_mode_mismatch"] = mc.common_mode_mismatch;
    j["completely_positive"] = p.completely_positive();
    out.push_back(j);
  }
  return out;
}

}  // namespace twospin::cli

#endif  // TWOSPIN_CLI_HPP_
