#include "relcav/cli/validate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "relcav/field_modes.hpp"

namespace relcav::cli {
namespace {

constexpr int kGramModes = 8;

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

// Sample-scenario resonance order n with 2 (tau + t) = T_n, or 0.
int resonance_order(const SampleScenarioParams& p, const CavityGeometry& inertial) {
  const double total = 2.0 * (p.tau + p.t);
  const double t1 = resonance_time(p.modes, inertial, 1);
  const double n = std::round(total / t1);
  if (n >= 1 && std::abs(total - n * t1) <= 1e-9 * std::max(1.0, total)) return static_cast<int>(n);
  return 0;
}

}  // namespace

std::vector<CheckResult> validate_config(const RunConfig& cfg, CoefficientCache& cache) {
  std::vector<CheckResult> out;
  const CavityGeometry g = cfg.geometry();
  const OracleSettings oracle = cfg.oracle();

  {
    double worst = 0.0;
    const auto inertial = g.with_h(0.0);
    for (int k = 1; k <= kGramModes; ++k) {
      for (int l = k; l <= kGramModes; ++l) {
        const auto fk = minkowski_slice(ModeIndex(k), inertial);
        const auto fl = minkowski_slice(ModeIndex(l), inertial);
        const Complex ip = kg_inner_product(fk, fl, inertial, oracle.quadrature).value;
        worst = std::max(worst, std::abs(ip - Complex(k == l ? 1.0 : 0.0)));
      }
    }
    out.push_back(check("minkowski modes orthonormal", worst < 1e-10, fmt::format("max deviation {:.3e}", worst)));
  }

  if (g.h() > 0.0 && g.massless()) {
    double worst = 0.0;
    for (const auto& k : {cfg.modes.first(), cfg.modes.second()}) {
      const auto f = rindler_slice(k, g);
      worst = std::max(worst, std::abs(kg_inner_product(f, f, g, oracle.quadrature).value - Complex(1.0)));
    }
    out.push_back(check("rindler modes normalised", worst < 1e-10, fmt::format("max deviation {:.3e}", worst)));

    const auto block = cache.junction(g.length(), g.h(), cfg.numerics.n_max);
    const double defect = unitarity_defect(block);
    out.push_back(check("junction unitarity (rows <= n_max/2)", defect <= cfg.numerics.unitarity_tolerance,
                        fmt::format("defect {:.3e}, tolerance {:.1e}", defect, cfg.numerics.unitarity_tolerance)));
  }

  const Trajectory trajectory = cfg.trajectory();
  TrajectoryEvaluation eval;
  try {
    eval = evaluate_trajectory(trajectory, g, cfg.modes, cache, cfg.pipeline());
  } catch (const Error& e) {
    out.push_back(check("pipeline evaluates", false, e.what()));
    return out;
  }
  for (const auto& w : eval.transform.warnings) out.push_back(check("perturbative regime", true, w));

  const auto& op = eval.transform.two_mode;
  const double defect = symplectic_defect(op.matrix);
  out.push_back(check("two-mode op symplectic", defect < 1e-8,
                      fmt::format("defect {:.3e} after renormalising a truncation defect of {:.3e}", defect,
                                  op.truncation_defect)));

  const auto sigma = reduce_two_mode(op, trajectory.repetitions());
  const double h = trajectory.max_abs_h();
  const double purity = std::abs(sigma.matrix.determinant() - 1.0);
  const double purity_bound = std::max(1e-12, 10.0 * h * h * trajectory.repetitions());
  out.push_back(check("state bona fide", is_bona_fide(sigma.matrix), "sigma + i Omega >= 0"));
  out.push_back(check("state pure (det sigma = 1 + O(h^2))", purity <= purity_bound,
                      fmt::format("|det - 1| = {:.3e}, bound {:.1e}", purity, purity_bound)));

  const double nu = eval.report.nu_tilde;
  const bool consistent = std::abs(eval.report.log_negativity - std::max(0.0, -std::log(nu))) < 1e-15 && nu > 0.0;
  out.push_back(check("log-negativity = max(0, -ln nu~)", consistent,
                      fmt::format("nu~ = {:.17g}, E = {:.6e}", nu, eval.report.log_negativity)));

  if (cfg.scenario && g.massless()) {
    const auto& p = *cfg.scenario;
    const auto inertial = g.with_h(0.0);
    const double closed = sample_scenario_B1(p, inertial);
    const double pipeline = std::abs(first_order_beta(trajectory, g, cfg.modes, cache, cfg.pipeline()));
    const double scale = mode_coupling(cfg.modes) * std::abs(p.h);
    const double err = std::abs(pipeline - closed);
    const bool ok = closed > 1e-3 * scale ? err <= 1e-3 * closed : err <= 1e-6 * scale + 1e-18;
    out.push_back(check("first-order |B| matches the closed form", ok,
                        fmt::format("pipeline {:.9e}, closed form {:.9e}", pipeline, closed)));

    if (const int n = resonance_order(p, inertial); n > 0) {
      auto q = p;
      q.resonance_order = n;
      const double e = sample_scenario_logneg(q, inertial);
      const double measured = eval.beta_after_repetitions;
      const double bound = std::max(1e-2 * e, 1e-3 * scale * p.repetitions);
      out.push_back(check(fmt::format("resonant (n = {}) entanglement matches the closed form", n),
                          std::abs(measured - e) <= bound,
                          fmt::format("N|B| = {:.9e}, closed form {:.9e}", measured, e)));
      out.push_back(check("commutator vanishes at resonance", eval.commutator.defect < 10.0 * h * h + 1e-15,
                          fmt::format("defect {:.3e}", eval.commutator.defect)));
    }
  }
  return out;
}

}  // namespace relcav::cli
