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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "twospin/channels.hpp"
#include "twospin/estimation.hpp"
#include "twospin/evolution.hpp"
#include "twospin/reference_data.hpp"
#include "twospin/states.hpp"
#include "twospin/tomography.hpp"

namespace twospin {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

#define REQUIRE(cond, msg)      \
  do {                          \
    if (!(cond)) {              \
      out.pass = false;         \
      out.detail = (msg);       \
      return out;               \
    }                           \
  } while (0)

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// 1. Correlated dephasing rates from the published ZQ/DQ pairs.
Outcome published_correlated_rates() {
  Outcome out;
  const std::pair<const char*, double> expected[] = {{"btc", 5.876}, {"cytosine", 3.393}, {"coumarin", 8.6735}};
  double worst = 0.0;
  for (const auto& [name, g3] : expected) {
    const auto m = reference_molecule(name);
    REQUIRE(m.has_value(), std::string("missing molecule ") + name);
    const double got = gamma3_difference(m->rates.zq, m->rates.dq).rate;
    worst = std::max(worst, std::abs(got - g3));
    REQUIRE(std::abs(got - g3) <= 1e-3, std::string(name) + fmt(": gamma3 = %.6f, expected %.4f", got, g3));
  }
  out.detail = fmt("max |error| = %.2e", worst);
  return out;
}

// 2. Numerical propagation against the closed-form ZQ/DQ decay.
Outcome propagation_matches_closed_form() {
  Outcome out;
  std::mt19937_64 rng(1001);
  const auto grid = log_grid(1e-3, 5.0, 16);
  const DensityMatrix zq = coherence_state(CoherenceKind::ZQ), dq = coherence_state(CoherenceKind::DQ);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const NoiseParams p = testing::random_admissible_params(rng);
    for (double t : grid) {
      const Propagator prop = make_propagator(p, t);
      worst = std::max(worst, max_abs(prop.apply(zq.matrix()) - analytic_zq(p, t).matrix()));
      worst = std::max(worst, max_abs(prop.apply(dq.matrix()) - analytic_dq(p, t).matrix()));
    }
  }
  REQUIRE(worst <= 1e-10, fmt("max elementwise error %.3e > 1e-10", worst));
  out.detail = fmt("max elementwise error %.2e over 100 x 16 points", worst);
  return out;
}

// 3. Trace and Hermiticity preservation of the generator; positivity of the
// Choi matrix of the propagator.
Outcome generator_is_cptp() {
  Outcome out;
  std::mt19937_64 rng(1002);
  double worst_choi = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const NoiseParams p = testing::random_admissible_params(rng);
    const Superoperator z = full_generator(p);
    REQUIRE(is_trace_preserving_generator(z, 1e-12), "generator is not trace preserving");
    REQUIRE(is_hermiticity_preserving(z, 1e-12), "generator is not Hermiticity preserving");
    for (double t : {0.01, 0.1, 1.0}) {
      const double m = min_eigenvalue(choi_matrix(make_propagator(p, t).superop));
      worst_choi = std::min(worst_choi, m);
      REQUIRE(m >= -1e-10, fmt("Choi min eigenvalue %.3e at t = %.2f", m, t));
    }
  }
  out.detail = fmt("100 generators; smallest Choi eigenvalue %.2e", worst_choi);
  return out;
}

// 4. exp(Z t) of the single-spin generators against the Kraus maps.
Outcome single_spin_channels() {
  Outcome out;
  std::mt19937_64 rng(1003);
  auto vec2 = [](const Mat2& r) {
    Vec4 v;
    v << r(0, 0), r(0, 1), r(1, 0), r(1, 1);
    return v;
  };
  auto kraus_apply = [](const std::vector<Mat2>& ks, const Mat2& r) {
    Mat2 acc = Mat2::Zero();
    for (const auto& k : ks) acc += k * r * k.adjoint();
    return acc;
  };
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Mat2 rho = testing::random_state_matrix<2>(rng);
    const double rate = testing::uniform(rng, 0.0, 10.0);
    const double t = testing::uniform(rng, 0.0, 2.0);
    const Vec4 pd = matrix_exp(Mat4(pd_generator_1spin(rate) * t)) * vec2(rho);
    const Vec4 gad = matrix_exp(Mat4(gad_highT_generator_1spin(rate) * t)) * vec2(rho);
    worst = std::max(worst, max_abs(pd - vec2(kraus_apply(pd_kraus(rate, t), rho))));
    worst = std::max(worst, max_abs(gad - vec2(kraus_apply(gad_kraus(rate, 0.5, t), rho))));
  }
  REQUIRE(worst <= 1e-10, fmt("max error %.3e > 1e-10", worst));
  out.detail = fmt("max error %.2e on 50 states", worst);
  return out;
}

// 5. Ideal-pulse preparation of the multiple-quantum targets.
Outcome preparation_fidelity() {
  Outcome out;
  double worst = 1.0;
  for (const char* name : {"btc", "cytosine", "coumarin"}) {
    const SpinSystem s = *spin_system_preset(name);
    for (auto k : {CoherenceKind::ZQ, CoherenceKind::DQ}) {
      const double f = fidelity(prepare_via_sequence(k, s, 1.0), coherence_state(k));
      worst = std::min(worst, f);
      REQUIRE(f >= 0.999, std::string(name) + " " + std::string(to_string(k)) + fmt(": fidelity %.6f", f));
    }
  }
  out.detail = fmt("min fidelity %.9f", worst);
  return out;
}

// 6. Tomography round trip.
Outcome tomography_round_trip() {
  Outcome out;
  std::mt19937_64 rng(1006);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = testing::random_state(rng);
    const double err = (reconstruct(simulate_all_readouts(rho)).matrix() - rho.matrix()).norm();
    worst = std::max(worst, err);
  }
  REQUIRE(worst <= 1e-10, fmt("max Frobenius error %.3e > 1e-10", worst));
  out.detail = fmt("max Frobenius error %.2e on 100 states", worst);
  return out;
}

std::vector<DecayCurve> model_curves(const NoiseParams& p, std::mt19937_64* rng, double noise) {
  std::normal_distribution<double> g(0.0, noise);
  std::vector<DecayCurve> out;
  for (auto k : kCurveKinds) {
    DecayCurve c;
    c.kind = k;
    const double tmax = 4.0 / model_rate(k, p);
    for (int i = 0; i < 24; ++i) {
      const double t = tmax * i / 23.0;
      double s = signal_model(k, p, t);
      if (rng) s *= 1.0 + g(*rng);
      c.samples.push_back({t, s, {}});
    }
    out.push_back(std::move(c));
  }
  return out;
}

// 7. Joint fit round trip, noiseless and under 2% multiplicative noise.
Outcome joint_fit_round_trip() {
  Outcome out;
  const NoiseParams p = testing::btc_like_params();
  const FitReport exact = fit_noise_model(model_curves(p, nullptr, 0.0));
  const auto got = as_array(exact.params), want = as_array(p);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(got[i] - want[i]) / want[i]);
  REQUIRE(worst <= 1e-6, fmt("noiseless relative error %.3e > 1e-6", worst));

  std::mt19937_64 rng(1007);
  const int reps = 200;
  double sum = 0.0, sum_var = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const FitReport r = fit_noise_model(model_curves(p, &rng, 0.02));
    sum += r.params.gamma3;
    sum_var += r.stderrs.gamma3 * r.stderrs.gamma3;
  }
  const double bias = sum / reps - p.gamma3;
  const double pooled = std::sqrt(sum_var / reps);
  REQUIRE(std::abs(bias) < 0.5 * pooled, fmt("gamma3 bias %.4f >= 0.5 x pooled stderr %.4f", bias, pooled));
  out.detail = fmt("noiseless rel. error %.1e; noisy gamma3 bias %.4f", worst, bias) + fmt(" (pooled stderr %.4f)", pooled);
  return out;
}

// 8. The consistency diagnostic exposes the ZQ/DQ mismatch with the right sign.
Outcome consistency_diagnostic() {
  Outcome out;
  const auto btc = *reference_molecule("btc");
  const NoiseParams independent = btc.rates.noise();
  const double common = independent.gamma1 + independent.gamma2 + 0.5 * (independent.Gamma1 + independent.Gamma2);
  REQUIRE(std::abs(common - 7.05) < 5e-3, fmt("common rate %.4f, expected 7.05", common));
  for (double g3 : {0.0, 3.0, 5.876}) {
    const ModelConsistency c = model_consistency(btc.rates.zq.rate, btc.rates.dq.rate, independent, g3);
    REQUIRE(std::abs(c.predicted_zq - (common - g3)) < 1e-12, "predicted ZQ rate is not common - gamma3");
    REQUIRE(std::abs(c.predicted_dq - (common + g3)) < 1e-12, "predicted DQ rate is not common + gamma3");
    REQUIRE(std::abs(c.residual_zq - (btc.rates.zq.rate - c.predicted_zq)) < 1e-12, "ZQ residual sign");
    REQUIRE(std::abs(c.residual_dq - (btc.rates.dq.rate - c.predicted_dq)) < 1e-12, "DQ residual sign");
  }
  const FitReport diff = fit_difference(model_curves([&] {
    NoiseParams q = independent;
    q.gamma3 = 5.876;
    return q;
  }(), nullptr, 0.0), independent);
  REQUIRE(diff.consistency.has_value(), "difference fit does not report the diagnostic");
  const ModelConsistency c =
      model_consistency(btc.rates.zq.rate, btc.rates.dq.rate, independent, btc.rates.gamma3.rate);
  REQUIRE(c.residual_zq < 0.0 && c.residual_dq < 0.0, "measured rates should sit below the prediction");
  out.detail = fmt("predicted ZQ %.4f vs measured 0.430, residual %.4f", c.predicted_zq, c.residual_zq);
  return out;
}

}  // namespace
}  // namespace twospin

int main() {
  using namespace twospin;
  const auto start = Clock::now();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"published correlated dephasing rates", published_correlated_rates},
      {"propagation matches closed form", propagation_matches_closed_form},
      {"generator is trace/Hermiticity preserving and CP", generator_is_cptp},
      {"single-spin channels match Kraus maps", single_spin_channels},
      {"preparation fidelity", preparation_fidelity},
      {"tomography round trip", tomography_round_trip},
      {"joint fit round trip", joint_fit_round_trip},
      {"model-consistency diagnostic", consistency_diagnostic},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
    if (!o.pass) ++failures;
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const bool fast = seconds <= 60.0;
  std::printf("%s 9 runtime: %.2f s (limit 60 s)\n", fast ? "PASS" : "FAIL", seconds);
  if (!fast) ++failures;
  return failures == 0 ? 0 : 1;
}
