#include "relcav/cli/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace relcav::cli {

ResonanceReport resonance_report(const RunConfig& cfg, const std::vector<int>& orders, CoefficientCache& cache) {
  if (!cfg.scenario) throw ConfigError("the resonance report needs a trajectory.scenario");
  ResonanceReport report;
  if (!has_first_order_resonance(cfg.modes)) {
    report.has_resonance = false;
    report.warnings.push_back(fmt::format("modes ({}, {}) are evenly separated: c_kk' = 0, no first-order resonance",
                                          cfg.modes.first().value(), cfg.modes.second().value()));
  }
  const CavityGeometry g = cfg.geometry();
  const CavityGeometry inertial = g.with_h(0.0);
  const int max_reps = std::max(20, cfg.repetitions);
  for (int n : orders) {
    ResonanceRow row;
    row.order = n;
    row.period = resonance_time(cfg.modes, inertial, n);
    const double half = row.period / 2.0;
    row.tau = cfg.scenario->tau > 0.0 && cfg.scenario->tau < half ? cfg.scenario->tau : half / 2.0;
    row.t = half - row.tau;
    auto p = cfg.scenario_at(row.tau, row.t);
    p.resonance_order = n;
    p.repetitions = 1;
    row.closed_form_gain = sample_scenario_logneg(p, inertial);

    const auto eval = evaluate_trajectory(p.trajectory(), g, cfg.modes, cache, cfg.pipeline());
    row.pipeline_gain = eval.beta_after_repetitions;
    row.nu_tilde_first_order = eval.report.nu_tilde_first_order;
    row.commutator_defect = eval.commutator.defect;
    row.squeezer = squeezer_decompose(repeat(eval.transform.two_mode, cfg.repetitions).matrix);
    row.max_repetitions = max_reps;
    for (const auto& point : predict_linear_growth(eval.transform.two_mode, max_reps)) {
      if (point.predicted != 0.0) {
        row.linearity_deviation =
            std::max(row.linearity_deviation, std::abs(point.measured / point.predicted - 1.0));
      }
    }
    if (row.closed_form_gain < 1e3 * std::numeric_limits<double>::epsilon()) {
      report.warnings.push_back(fmt::format(
          "order {}: the first-order gain vanishes for this epsilon and y; nu~ and the linearity figure are "
          "higher-order effects",
          n));
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_resonance_report(const ResonanceReport& r) {
  std::string out;
  if (!r.has_resonance) out += "no first-order resonance\n";
  for (const auto& w : r.warnings) out += fmt::format("warning: {}\n", w);
  out += fmt::format("{:>3} {:>12} {:>12} {:>12} {:>13} {:>13} {:>13} {:>12} {:>10} {:>10} {:>10}\n", "n", "T_n", "tau",
                     "t", "E_gain_eq", "E_gain_pipe", "nu1_1", "r(S^N)", "psi_k", "psi_k'", "lin_dev");
  for (const auto& row : r.rows) {
    out += fmt::format("{:>3} {:>12.6g} {:>12.6g} {:>12.6g} {:>13.6e} {:>13.6e} {:>13.6e} {:>12.5e} {:>10.5f} "
                       "{:>10.5f} {:>10.3e}\n",
                       row.order, row.period, row.tau, row.t, row.closed_form_gain, row.pipeline_gain,
                       row.nu_tilde_first_order, row.squeezer.r, row.squeezer.psi_k, row.squeezer.psi_kp,
                       row.linearity_deviation);
  }
  return out;
}

std::string resonance_csv(const ResonanceReport& r, const std::string& header) {
  std::string out = header;
  out += "n,T_n,tau,t,closed_form_gain,pipeline_gain,nu_tilde_1st_order,commutator_defect,r,psi_k,psi_kp,"
         "squeezer_residual,linearity_deviation,max_repetitions\n";
  for (const auto& row : r.rows) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{}\n",
                       row.order, row.period, row.tau, row.t, row.closed_form_gain, row.pipeline_gain,
                       row.nu_tilde_first_order, row.commutator_defect, row.squeezer.r, row.squeezer.psi_k,
                       row.squeezer.psi_kp, row.squeezer.residual, row.linearity_deviation, row.max_repetitions);
  }
  return out;
}

}  // namespace relcav::cli
