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

// twospin: simulate, tomograph and fit relaxation of two-spin NMR coherences.
//
//   twospin prepare --preset btc --target DQ
//   twospin decay   --preset btc --kind DQ --out runs/
//   twospin tomo    --preset btc --target ZQ [--records r.json]
//   twospin fit     --zq zq.csv --dq dq.csv [--mode joint --sq1 ...] --out runs/
//   twospin report
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 non-convergence.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twospin/cli.hpp"

namespace {

namespace fs = std::filesystem;
using namespace twospin;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitConvergence = 4;

struct CommonFlags {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--preset", f.preset, "molecule preset: btc, cytosine or coumarin");
  cmd->add_option("--out", f.out, "output directory (default: stdout)");
  cmd->add_option("--seed", f.seed, "random seed for simulated readout noise");
}

cli::RunConfig resolve(const CommonFlags& f) {
  cli::RunConfig c = cli::load_config(f.config, f.preset);
  if (f.out) c.out = *f.out;
  if (f.seed) c.seed = *f.seed;
  for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
  c.warnings.clear();
  return c;
}

/// Writes `text` to out/name, or to stdout when no output directory is set.
void emit(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("--out: cannot create directory '" + out_dir + "': " + ec.message());
  const fs::path path = fs::path(out_dir) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("--out: cannot write '" + path.string() + "'");
  file << text;
  std::cerr << "wrote " << path.string() << '\n';
}

CoherenceKind coherence_flag(const std::string& s) {
  auto k = cli::parse_coherence_kind(s);
  if (!k) throw ConfigError("--target: expected ZQ, DQ, SQ1 or SQ2, got '" + s + "'");
  return *k;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-spin NMR coherence relaxation: simulation, tomography and rate fitting"};
  app.require_subcommand(1);

  CommonFlags prep_flags, decay_flags, tomo_flags, fit_flags;
  std::string target = "DQ", tomo_target = "DQ", kind_name = "DQ", format = "csv", mode_name = "difference";
  std::optional<std::string> records;
  std::map<CurveKind, std::string> curve_paths;
  std::string p_t1_1, p_t1_2, p_sq1, p_sq2, p_zq, p_dq;
  std::vector<std::string> molecules{"btc", "cytosine", "coumarin"};

  auto* prep = app.add_subcommand("prepare", "prepare a coherence, tomograph it, report fidelity");
  add_common(prep, prep_flags);
  prep->add_option("--target", target, "ZQ, DQ, SQ1 or SQ2")->capture_default_str();

  auto* decay = app.add_subcommand("decay", "simulate a decay curve over the time grid");
  add_common(decay, decay_flags);
  decay->add_option("--kind", kind_name, "T1_1, T1_2, SQ1, SQ2, ZQ or DQ")->capture_default_str();
  decay->add_option("--format", format, "csv or json")->capture_default_str();

  auto* tomo = app.add_subcommand("tomo", "reconstruct a state from readout records");
  add_common(tomo, tomo_flags);
  tomo->add_option("--target", tomo_target, "reference coherence for the fidelity")->capture_default_str();
  tomo->add_option("--records", records, "records JSON; simulated from the prepared target if absent");

  auto* fit = app.add_subcommand("fit", "fit relaxation rates to decay curves");
  add_common(fit, fit_flags);
  fit->add_option("--mode", mode_name, "difference or joint")->capture_default_str();
  fit->add_option("--t1-1", p_t1_1, "inversion recovery CSV, spin 1");
  fit->add_option("--t1-2", p_t1_2, "inversion recovery CSV, spin 2");
  fit->add_option("--sq1", p_sq1, "SQ1 decay CSV");
  fit->add_option("--sq2", p_sq2, "SQ2 decay CSV");
  fit->add_option("--zq", p_zq, "ZQ decay CSV");
  fit->add_option("--dq", p_dq, "DQ decay CSV");

  auto* report = app.add_subcommand("report", "correlated dephasing rates from published ZQ/DQ rates");
  report->add_option("molecules", molecules, "molecules to report")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*prep) {
      const auto c = resolve(prep_flags);
      const auto r = cli::cmd_prepare(c, coherence_flag(target));
      print_warnings(r.warnings);
      emit(c.out, "prepare_" + target + ".json", cli::to_json(r, c, true).dump(2) + "\n");
      std::cerr << "fidelity " << format_double(r.fidelity) << '\n';
    } else if (*decay) {
      const auto c = resolve(decay_flags);
      auto kind = parse_curve_kind(kind_name);
      if (!kind) throw ConfigError("--kind: unknown curve kind '" + kind_name + "'");
      if (format != "csv" && format != "json") throw ConfigError("--format: expected csv or json");
      const auto curve = cli::cmd_decay(c, *kind);
      const std::string base = "decay_" + std::string(to_string(*kind));
      if (format == "csv")
        emit(c.out, base + ".csv", cli::curve_to_csv(curve));
      else
        emit(c.out, base + ".json", cli::curve_to_json(curve).dump(2) + "\n");
    } else if (*tomo) {
      const auto c = resolve(tomo_flags);
      const auto r = cli::cmd_tomo(c, coherence_flag(tomo_target), records);
      print_warnings(r.warnings);
      emit(c.out, "tomo_" + tomo_target + ".json", cli::to_json(r, c, !records).dump(2) + "\n");
      std::cerr << "fidelity " << format_double(r.fidelity) << '\n';
    } else if (*fit) {
      FitMode mode;
      if (mode_name == "difference")
        mode = FitMode::difference;
      else if (mode_name == "joint")
        mode = FitMode::joint;
      else
        throw ConfigError("--mode: expected difference or joint");
      std::optional<NoiseParams> fixed;
      std::string out_dir = fit_flags.out.value_or("");
      if (fit_flags.config || fit_flags.preset) {
        const auto c = resolve(fit_flags);
        fixed = c.noise;
        out_dir = c.out;
      }
      const std::pair<CurveKind, const std::string*> given[] = {
          {CurveKind::T1_spin1, &p_t1_1}, {CurveKind::T1_spin2, &p_t1_2}, {CurveKind::SQ1, &p_sq1},
          {CurveKind::SQ2, &p_sq2},       {CurveKind::ZQ, &p_zq},         {CurveKind::DQ, &p_dq}};
      for (const auto& [k, p] : given)
        if (!p->empty()) curve_paths[k] = *p;
      const auto result = cli::cmd_fit(curve_paths, mode, fixed);
      emit(out_dir, "fit_report.json", to_json(result.report).dump(2) + "\n");
      if (!out_dir.empty()) emit(out_dir, "fit_plot.svg", result.svg);
      if (!result.report.converged) return kExitConvergence;
    } else if (*report) {
      std::cout << cli::cmd_report(molecules).dump(2) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NonPhysicalError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConvergenceError& e) {
    std::cerr << "fit did not converge: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
