#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relcav/cli/config.hpp"

namespace relcav::cli {

struct SweepResult {
  std::vector<double> tau;
  std::vector<double> t;
  /// Indexed (tau, t); NaN where the point failed.
  Eigen::MatrixXd nu_tilde_first_order;
  Eigen::MatrixXd log_negativity;
  Eigen::MatrixXd commutator_defect;
  int failures = 0;
  std::vector<std::string> failure_messages;  // first few only
  std::string config_hash;
  std::string version;
  /// Unitarity defect of the junction blocks the sweep used.
  double unitarity_defect = 0.0;
  std::string timestamp;
};

/// Evaluates the pipeline on the sweep grid with up to `workers` threads. The
/// result does not depend on the worker count.
SweepResult run_sweep(const RunConfig& cfg, CoefficientCache& cache, int workers = 1);

/// Columns tau,t,nu_tilde_1st_order,log_negativity,commutator_defect; rows in
/// grid order (tau outer); 17 significant digits; '#' header with hash and version.
void write_sweep_csv(const SweepResult& res, const std::filesystem::path& path);
std::string sweep_csv(const SweepResult& res);

}  // namespace relcav::cli
