// Acceptance criteria, one line each. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "relcav/cli/config.hpp"
#include "relcav/cli/sweep.hpp"
#include "relcav/field_modes.hpp"
#include "relcav/trajectory.hpp"

using namespace relcav;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr double kH = 1e-4;
const ModePair k12(1, 2);
const CavityGeometry kInertial = CavityGeometry::from_length(1.0, 0.0);
const CavityGeometry kAccel = CavityGeometry::from_length(1.0, kH);

CoefficientCache& cache() {
  static CoefficientCache c;
  return c;
}

const FirstOrderCoeffs& first_order() {
  static const FirstOrderCoeffs c = first_order_coefficients(kInertial, 40);
  return c;
}

SampleScenarioParams scenario(double tau, double t, double y, int eps, int reps) {
  SampleScenarioParams p;
  p.tau = tau;
  p.t = t;
  p.h = kH;
  p.y = y;
  p.epsilon = eps;
  p.repetitions = reps;
  return p;
}

// Scenario with 2 (tau + t) = T_n and the given coast time.
SampleScenarioParams resonant(int n, double t, double y, int eps, int reps) {
  auto p = scenario(resonance_time(k12, kInertial, n) / 2 - t, t, y, eps, reps);
  p.resonance_order = n;
  return p;
}

double slope(const double (&x)[3], const double (&y)[3]) {
  double mx = 0, my = 0;
  for (int i = 0; i < 3; ++i) {
    mx += std::log(x[i]) / 3;
    my += std::log(y[i]) / 3;
  }
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

Outcome oracle_sanity() {
  double gram = 0.0;
  std::vector<SliceFunction> m;
  for (int k = 1; k <= 40; ++k) m.push_back(minkowski_slice(ModeIndex(k), kInertial));
  for (int k = 0; k < 40; ++k) {
    for (int l = k; l < 40; ++l) {
      const Complex ip = kg_inner_product(m[k], m[l], kInertial).value;
      gram = std::max(gram, std::abs(ip - Complex(k == l ? 1.0 : 0.0)));
    }
  }
  double norm = 0.0;
  for (double h : {1e-4, 1e-2, 0.1}) {
    const auto g = CavityGeometry::from_length(1.0, h);
    for (int k = 1; k <= 40; ++k) {
      const auto f = rindler_slice(ModeIndex(k), g);
      norm = std::max(norm, std::abs(kg_inner_product(f, f, g).value - Complex(1.0)));
    }
  }
  return {gram < 1e-10 && norm < 1e-10,
          fmt::format("Minkowski Gram (k,l <= 40) max dev {:.2e}; Rindler self-norm (k <= 40, h in 1e-4..0.1) max dev "
                      "{:.2e}; tol 1e-10",
                      gram, norm)};
}

Outcome perturbative_order() {
  const double hs[3] = {1e-2, 1e-3, 1e-4};
  double err[3];
  for (int i = 0; i < 3; ++i) {
    const auto block = junction_coefficients_oracle(CavityGeometry::from_length(1.0, hs[i]), 40);
    err[i] = (block.beta - hs[i] * first_order().beta1).cwiseAbs().maxCoeff();
  }
  const double s = slope(hs, err);
  return {std::abs(s - 2.0) <= 0.1,
          fmt::format("max|beta(h) - h beta1| = {:.3e}, {:.3e}, {:.3e}; slope {:.4f} (want 2.0 +- 0.1)", err[0], err[1],
                      err[2], s)};
}

Outcome coupling_formula() {
  const auto& c = first_order();
  const double c12 = mode_coupling(k12);
  const double rel = std::abs(std::abs(c.beta1(0, 1)) - c12) / c12;
  double even = 0.0;
  for (int k = 0; k < c.n_max; ++k) {
    for (int n = k % 2; n < c.n_max; n += 2) even = std::max(even, std::abs(c.beta1(k, n)));
  }
  const double b13 = std::abs(c.beta1(0, 2));
  return {rel < 1e-4 && b13 < 1e-8 && even < 1e-8,
          fmt::format("|beta1_12| = {:.10f} vs c12 = {:.10f} (rel {:.2e}, tol 1e-4); |beta1_13| = {:.1e}; max even-sep "
                      "{:.1e} (tol 1e-8)",
                      std::abs(c.beta1(0, 1)), c12, rel, b13, even)};
}

Outcome closed_form_equivalence() {
  std::mt19937_64 rng(20121017);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  std::uniform_real_distribution<double> ratio(0.1, 2.0);
  std::bernoulli_distribution sign(0.5);
  double worst = 0.0;
  double median_scale = 0.0;
  int draws = 0;
  for (; draws < 1000; ++draws) {
    const auto p = scenario(time(rng), time(rng), ratio(rng), sign(rng) ? 1 : -1, 1);
    const double closed = sample_scenario_B1(p, kInertial);
    const double pipe = std::abs(first_order_beta(p.trajectory(), kAccel, k12, cache()));
    worst = std::max(worst, std::abs(pipe - closed) / closed);
    median_scale += closed / 1000;
  }
  return {worst < 1e-3, fmt::format("{} random (tau, t, y, eps) draws at h=1e-4: worst relative deviation {:.2e} (tol "
                                    "1e-3); mean |B1| {:.3e}",
                                    draws, worst, median_scale)};
}

Outcome resonance_times() {
  const double t1 = resonance_time(k12, kInertial, 1);
  const bool exact = t1 == 2.0 / 3.0;
  double worst_w = 0.0;
  double worst_defect = 0.0;
  // Odd order needs opposite bursts and even order same-direction ones for a nonzero B.
  for (auto [n, eps] : {std::pair{1, -1}, {2, 1}, {3, -1}, {4, 1}}) {
    const auto p = resonant(n, 0.1, 1.0, eps, 1);
    const auto transform = build_segment_symplectic(p.trajectory(), kAccel, k12, cache());
    const auto report = commutator_report(transform, k12, kInertial, resonance_time(k12, kInertial, n));
    worst_w = std::max(worst_w, std::abs(report.w));
    worst_defect = std::max(worst_defect, report.defect);
  }
  const double bound = 10 * kH * kH;
  return {exact && worst_w < bound && worst_defect < bound,
          fmt::format("T_1 = {:.17g} ({}); at T_1..T_4: max |w| {:.2e}, max ||[S^T,S]|| {:.2e} (tol 10h^2 = {:.0e})", t1,
                      exact ? "exactly 2/3" : "not 2/3", worst_w, worst_defect, bound)};
}

Outcome linear_growth() {
  const auto on = build_segment_symplectic(resonant(2, 1.0 / 3.0, 1.0, 1, 1).trajectory(), kAccel, k12, cache());
  double dev = 0.0;
  for (const auto& g : predict_linear_growth(on.two_mode, 20)) dev = std::max(dev, std::abs(g.measured / g.predicted - 1));

  const auto p = scenario(0.2, 0.23, 1.0, 1, 1);
  const auto off = build_segment_symplectic(p.trajectory(), kAccel, k12, cache());
  const auto growth = predict_linear_growth(off.two_mode, 50);
  int rises = 0;
  double peak = 0.0;
  for (std::size_t i = 1; i < growth.size(); ++i) {
    rises += growth[i].measured > growth[i - 1].measured;
    peak = std::max(peak, growth[i].measured);
  }
  const bool monotone = rises == static_cast<int>(growth.size()) - 1;
  const double linear_at_50 = growth.back().predicted;
  return {dev < 1e-2 && !monotone && peak < 0.5 * linear_at_50,
          fmt::format("resonant max |nu1_N / (N nu1_1) - 1| = {:.2e} for N <= 20 (tol 1e-2); off-resonant: {} of 49 "
                      "steps rise, peak {:.2e} vs linear 50 nu1_1 = {:.2e}",
                      dev, rises, peak, linear_at_50)};
}

Outcome eq6_structure() {
  const double sum = 3.0 * pi;
  double zero_closed = 0.0;
  double zero_pipe = 0.0;
  for (int m = 0; m <= 1; ++m) {
    for (auto [n, t] : {std::pair{2, 2 * pi * m / sum}, {4, 2 * pi * m / sum}, {1, (2 * m + 1) * pi / sum},
                        {3, (2 * m + 1) * pi / sum}}) {
      for (int eps : {1, -1}) {
        const auto p = resonant(n, t, 0.7, eps, 5);
        if (p.tau < 0) continue;
        zero_closed = std::max(zero_closed, sample_scenario_logneg(p, kInertial));
        zero_pipe = std::max(zero_pipe, evaluate_trajectory(p.trajectory(), kAccel, k12, cache()).beta_after_repetitions);
      }
    }
  }
  const auto best = resonant(2, pi / sum, 1.0, 1, 5);
  const double closed = sample_scenario_logneg(best, kInertial);
  const double expected = 4 * 5 * mode_coupling(k12) * kH;
  const auto eval = evaluate_trajectory(best.trajectory(), kAccel, k12, cache());
  const double rel = std::abs(eval.beta_after_repetitions - closed) / closed;
  // The reference 2.1229e-5 carries five digits; 4Nch evaluates to 2.12281e-5.
  const double reference = std::abs(closed - 2.1229e-5) / 2.1229e-5;
  const bool ok = zero_closed < 1e-9 && zero_pipe < 1e-9 && std::abs(closed - expected) < 1e-15 && reference < 1e-4 &&
                  rel < 1e-2;
  return {ok, fmt::format("zeros: closed form {:.1e}, pipeline N|B| {:.1e} (tol 1e-9); max 4Nch = {:.6e} (closed form "
                          "{:.6e}, vs reference 2.1229e-5 rel {:.1e}, tol 1e-4), pipeline {:.6e} (rel {:.1e}, tol 1e-2); "
                          "pipeline -ln nu~ = {:.6e}",
                          zero_closed, zero_pipe, expected, closed, reference, eval.beta_after_repetitions, rel,
                          eval.report.log_negativity)};
}

Outcome surface_reproduction() {
  const auto cfg = cli::load_config(std::string(RELCAV_SOURCE_DIR) + "/configs/same_direction.yaml");
  const auto start = std::chrono::steady_clock::now();
  const int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto res = cli::run_sweep(cfg, cache(), workers);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& v = res.nu_tilde_first_order;
  const auto n = v.rows();
  const double period_tau = (v.row(0) - v.row(n - 1)).cwiseAbs().maxCoeff();
  const double period_t = (v.col(0) - v.col(n - 1)).cwiseAbs().maxCoeff();

  Eigen::Index gi = 0, gj = 0;
  v.maxCoeff(&gi, &gj);
  // Closed-form surface: |B1(tau, t)| times the geometric sum over N periods of phase (w1 + w2) 2 (tau + t).
  const int reps = cfg.repetitions;
  const auto surface = [&](double tau, double t) {
    const double b1 = sample_scenario_B1(scenario(tau, t, 1.0, 1, 1), kInertial);
    const double phi = 3.0 * pi * 2.0 * (tau + t);
    const double s = std::sin(phi / 2);
    return b1 * (std::abs(s) < 1e-12 ? reps : std::abs(std::sin(reps * phi / 2) / s));
  };
  constexpr int kFine = 1200;
  const double span = 2.0 / 3.0;
  double best = -1, best_tau = 0, best_t = 0;
  for (int i = 0; i <= kFine; ++i) {
    for (int j = 0; j <= kFine; ++j) {
      const double tau = span * i / kFine, t = span * j / kFine;
      if (const double f = surface(tau, t); f > best) best = f, best_tau = tau, best_t = t;
    }
  }
  const double cell = span / (n - 1);
  const double dtau = std::abs(res.tau[gi] - best_tau), dt = std::abs(res.t[gj] - best_t);
  const double amplitude = 2 * 4 * reps * mode_coupling(k12) * kH;
  const bool ok = res.failures == 0 && period_tau < 1e-8 && period_t < 1e-8 && dtau <= cell && dt <= cell &&
                  v.minCoeff() > -1e-12 && v.maxCoeff() <= amplitude * 1.001;
  return {ok, fmt::format("64x64 in {:.1f}s: period defect tau {:.1e}, t {:.1e} (tol 1e-8); argmax ({:.4f}, {:.4f}) vs "
                          "closed form ({:.4f}, {:.4f}), cell {:.4f}; range [{:.1e}, {:.4e}] <= 2*4Nch = {:.4e}",
                          seconds, period_tau, period_t, res.tau[gi], res.t[gj], best_tau, best_t, cell, v.minCoeff(),
                          v.maxCoeff(), amplitude)};
}

Outcome gate_form() {
  double worst = 0.0;
  for (auto [n, eps] : {std::pair{2, 1}, {1, -1}}) {
    const auto p = resonant(n, 0.15, 1.0, eps, 1);
    const auto s = build_segment_symplectic(p.trajectory(), kAccel, k12, cache()).two_mode;
    for (int reps : {1, 5, 20}) worst = std::max(worst, squeezer_decompose(repeat(s, reps).matrix).residual);
  }
  return {worst < 1e-7, fmt::format("max ||S^T S - (ZR)^T (ZR)||_F over resonant S^N, N in {{1,5,20}}: {:.2e} (tol 1e-7)",
                                    worst)};
}

Outcome gaussian_bookkeeping() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  std::uniform_real_distribution<double> ratio(0.1, 2.0);
  double defect = 0.0, raw = 0.0, purity = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int reps = 1 + i % 10;
    const auto p = scenario(time(rng), time(rng), ratio(rng), i % 2 ? 1 : -1, reps);
    const auto eval = evaluate_trajectory(p.trajectory(), kAccel, k12, cache());
    const auto& op = eval.transform.two_mode;
    defect = std::max({defect, symplectic_defect(op.matrix), symplectic_defect(repeat(op, reps).matrix)});
    raw = std::max(raw, op.truncation_defect);
    const auto sigma = reduce_two_mode(op, reps);
    purity = std::max(purity, std::abs(sigma.matrix.determinant() - 1.0));
  }
  const double purity_tol = 10 * kH * kH;
  return {defect < 1e-8 && purity < purity_tol,
          fmt::format("200 random trajectories: max ||S^T Omega S - Omega|| {:.1e} (tol 1e-8; raw truncation defect "
                      "{:.1e} renormalised); max |det sigma_N - 1| {:.1e} (tol 10h^2)",
                      defect, raw, purity)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle sanity", oracle_sanity},
      {"perturbative order", perturbative_order},
      {"coupling formula cross-check", coupling_formula},
      {"closed-form |B1| equivalence", closed_form_equivalence},
      {"resonance times", resonance_times},
      {"linear growth", linear_growth},
      {"log-negativity structure", eq6_structure},
      {"entanglement surface reproduction", surface_reproduction},
      {"gate form", gate_form},
      {"Gaussian bookkeeping", gaussian_bookkeeping},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    failures += !o.pass;
    fmt::print("[{}] {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures;
}
