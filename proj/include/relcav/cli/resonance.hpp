#pragma once

#include <string>
#include <vector>

#include "relcav/cli/config.hpp"

namespace relcav::cli {

struct ResonanceRow {
  int order = 0;
  double period = 0.0;  // T_n
  double tau = 0.0;
  double t = 0.0;
  /// Per-repetition log-negativity gain from the closed form (normalisation N c |...| h).
  double closed_form_gain = 0.0;
  /// Per-repetition |B_kk'| from the pipeline, same normalisation.
  double pipeline_gain = 0.0;
  /// nu~(1)_1 from the covariance matrix.
  double nu_tilde_first_order = 0.0;
  double commutator_defect = 0.0;
  SqueezerFit squeezer;  // of S^N
  /// max over N <= max_repetitions of |nu~(1)_N / (N nu~(1)_1) - 1|.
  double linearity_deviation = 0.0;
  int max_repetitions = 0;
};

struct ResonanceReport {
  bool has_resonance = true;
  std::vector<std::string> warnings;
  std::vector<ResonanceRow> rows;
};

/// For each order n: T_n, the tau/t split used (the config's tau when it fits
/// inside T_n / 2, else an even split), closed-form and pipeline gains,
/// squeezer parameters of S^N and the linearity deviation for N up to
/// max(20, repetitions). Needs a sample-scenario trajectory.
ResonanceReport resonance_report(const RunConfig& cfg, const std::vector<int>& orders, CoefficientCache& cache);

std::string format_resonance_report(const ResonanceReport& r);
std::string resonance_csv(const ResonanceReport& r, const std::string& header);

}  // namespace relcav::cli
