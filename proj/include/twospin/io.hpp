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

#ifndef TWOSPIN_IO_HPP_
#define TWOSPIN_IO_HPP_

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twospin/channels.hpp"
#include "twospin/error.hpp"
#include "twospin/estimation.hpp"
#include "twospin/states.hpp"

namespace twospin {

// CSV curve contract: UTF-8, header `t,signal[,sigma]`, '.' decimal point,
// times in seconds unless a `# time_unit: ms` comment precedes the data.
// Other lines starting with '#' are comments; blank lines are ignored.

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_number(std::string_view field, const std::string& where) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end)
    throw DataError(where + ": cannot parse number '" + std::string(field) + "'");
  return v;
}

}  // namespace detail

/// Parses a curve; `source` prefixes error messages ("file.csv:12: ...").
inline DecayCurve parse_curve(std::istream& in, CurveKind kind, const std::string& source = "<input>") {
  DecayCurve curve;
  curve.kind = kind;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  bool has_sigma = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    std::string_view view = detail::trim(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    if (view.front() == '#') {
      auto body = detail::trim(view.substr(1));
      if (body.starts_with("time_unit:")) {
        const auto unit = detail::trim(body.substr(10));
        if (unit == "s")
          curve.unit = TimeUnit::seconds;
        else if (unit == "ms")
          curve.unit = TimeUnit::milliseconds;
        else
          throw DataError(where + ": unknown time unit '" + std::string(unit) + "'");
      }
      continue;
    }
    const auto fields = detail::split_commas(view);
    if (!header_seen) {
      if (fields.size() < 2 || fields.size() > 3 || fields[0] != "t" || fields[1] != "signal" ||
          (fields.size() == 3 && fields[2] != "sigma"))
        throw DataError(where + ": expected header 't,signal' or 't,signal,sigma'");
      has_sigma = fields.size() == 3;
      header_seen = true;
      continue;
    }
    if (fields.size() != (has_sigma ? 3u : 2u))
      throw DataError(where + ": expected " + std::to_string(has_sigma ? 3 : 2) + " columns, got " +
                      std::to_string(fields.size()));
    Sample s;
    s.t = detail::parse_number(fields[0], where);
    s.signal = detail::parse_number(fields[1], where);
    if (has_sigma) s.sigma = detail::parse_number(fields[2], where);
    if (!curve.samples.empty() && !(s.t > curve.samples.back().t))
      throw DataError(where + ": time " + std::string(fields[0]) +
                      " is not greater than the previous row (times must be strictly increasing)");
    if (s.sigma && !(*s.sigma > 0.0)) throw DataError(where + ": sigma must be positive");
    curve.samples.push_back(s);
  }
  if (!header_seen) throw DataError(source + ": missing header 't,signal[,sigma]'");
  try {
    validate(curve);
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
  return curve;
}

inline DecayCurve load_curve(const std::string& path, CurveKind kind) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return parse_curve(in, kind, path);
}

inline void write_curve_csv(std::ostream& out, const DecayCurve& curve) {
  out << "# kind: " << to_string(curve.kind) << '\n';
  if (curve.unit == TimeUnit::milliseconds) out << "# time_unit: ms\n";
  const bool sigma = curve.weighted();
  out << (sigma ? "t,signal,sigma\n" : "t,signal\n");
  for (const auto& s : curve.samples) {
    out << format_double(s.t) << ',' << format_double(s.signal);
    if (sigma) out << ',' << format_double(*s.sigma);
    out << '\n';
  }
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const Mat4& m) {
  auto rows = nlohmann::ordered_json::array();
  for (int r = 0; r < 4; ++r) {
    auto row = nlohmann::ordered_json::array();
    for (int c = 0; c < 4; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

/// Inverse of to_json(Mat4): nested arrays of [re, im] pairs.
inline Mat4 matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("matrix JSON: expected 4 rows");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 4) throw DataError("matrix JSON: expected 4 columns");
    for (int c = 0; c < 4; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw DataError("matrix JSON: entries must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline nlohmann::ordered_json to_json(const NoiseParams& p) {
  return {{"gamma1", p.gamma1}, {"gamma2", p.gamma2}, {"gamma3", p.gamma3},
          {"Gamma1", p.Gamma1}, {"Gamma2", p.Gamma2}, {"nbar", p.nbar}};
}

/// Reads NoiseParams; missing keys default to 0 (nbar to 1/2), unknown keys are
/// rejected.
inline NoiseParams noise_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("noise: expected an object");
  NoiseParams p;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("noise." + key + ": expected a number");
    const double v = value.get<double>();
    if (key == "gamma1") p.gamma1 = v;
    else if (key == "gamma2") p.gamma2 = v;
    else if (key == "gamma3") p.gamma3 = v;
    else if (key == "Gamma1") p.Gamma1 = v;
    else if (key == "Gamma2") p.Gamma2 = v;
    else if (key == "nbar") p.nbar = v;
    else throw ConfigError("noise: unknown key '" + key + "'");
  }
  return p;
}

inline std::string_view to_string(FitMode m) { return m == FitMode::joint ? "joint" : "difference"; }

/// Flat report object: parameter values and standard errors, per-curve
/// residual norms, convergence diagnostics, model-consistency residuals.
inline nlohmann::ordered_json to_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(r.mode);
  const auto vals = as_array(r.params);
  const auto errs = as_array(r.stderrs);
  static constexpr const char* names[5] = {"gamma1", "gamma2", "gamma3", "Gamma1", "Gamma2"};
  for (std::size_t i = 0; i < 5; ++i) {
    j[names[i]] = vals[i];
    j[std::string(names[i]) + "_stderr"] = errs[i];
    j[std::string(names[i]) + "_fitted"] = r.fitted[i];
  }
  for (const auto& [kind, est] : r.single_curve_rates) {
    j["rate_" + std::string(to_string(kind))] = est.rate;
    j["rate_" + std::string(to_string(kind)) + "_stderr"] = est.std_error;
  }
  for (const auto& c : r.per_curve) {
    j["residual_norm_" + std::string(to_string(c.kind))] = c.residual_norm;
    j["amplitude_" + std::string(to_string(c.kind))] = c.amplitude;
  }
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["gradient_norm"] = r.gradient_norm;
  j["completely_positive"] = r.completely_positive ? nlohmann::ordered_json(*r.completely_positive) : nlohmann::ordered_json(nullptr);
  if (r.consistency) {
    const auto& c = *r.consistency;
    j["consistency_predicted_zq"] = c.predicted_zq;
    j["consistency_predicted_dq"] = c.predicted_dq;
    j["consistency_measured_zq"] = c.measured_zq;
    j["consistency_measured_dq"] = c.measured_dq;
    j["consistency_residual_zq"] = c.residual_zq;
    j["consistency_residual_dq"] = c.residual_dq;
    j["consistency_common_mode_mismatch"] = c.common_mode_mismatch;
  }
  return j;
}

inline void save_report(const FitReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << to_json(report).dump(2) << '\n';
}

}  // namespace twospin

#endif  // TWOSPIN_IO_HPP_
