#include "relcav/cli/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

namespace relcav::cli {
namespace {

constexpr int kKeptMessages = 8;

std::string utc_now() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now);
}

std::string cell(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg, CoefficientCache& cache, int workers) {
  if (!cfg.sweep) throw ConfigError("config has no sweep section");
  if (!cfg.scenario) throw ConfigError("sweep requires a sample scenario");
  if (workers < 1) throw DomainError(fmt::format("worker count must be >= 1, got {}", workers));

  SweepResult res;
  res.config_hash = config_hash(cfg);
  res.version = tool_version();
  res.timestamp = utc_now();
  res.tau = {cfg.scenario->tau};
  res.t = {cfg.scenario->t};
  for (const auto& axis : cfg.sweep->axes) (axis.variable == "tau" ? res.tau : res.t) = axis.values();

  const auto rows = static_cast<Eigen::Index>(res.tau.size());
  const auto cols = static_cast<Eigen::Index>(res.t.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.nu_tilde_first_order = Eigen::MatrixXd::Constant(rows, cols, nan);
  res.log_negativity = Eigen::MatrixXd::Constant(rows, cols, nan);
  res.commutator_defect = Eigen::MatrixXd::Constant(rows, cols, nan);

  const CavityGeometry g = cfg.geometry();
  const PipelineSettings settings = cfg.pipeline();
  // Fill the junction cache before the workers start so they only read it.
  for (double h : {cfg.scenario->h, cfg.scenario->y * cfg.scenario->h}) {
    if (h != 0.0 && std::abs(h) <= settings.max_h) {
      const auto block = cache.junction(g.length(), h, settings.n_max);
      res.unitarity_defect = std::max(res.unitarity_defect, unitarity_defect(block));
    }
  }

  std::atomic<Eigen::Index> next{0};
  std::mutex failure_mutex;
  std::vector<std::pair<Eigen::Index, std::string>> failures;
  const auto total = rows * cols;
  const auto work = [&] {
    for (Eigen::Index idx = next++; idx < total; idx = next++) {
      const Eigen::Index i = idx / cols;
      const Eigen::Index j = idx % cols;
      try {
        const auto p = cfg.scenario_at(res.tau[i], res.t[j]);
        const auto eval = evaluate_trajectory(p.trajectory(), g, cfg.modes, cache, settings);
        res.nu_tilde_first_order(i, j) = eval.report.nu_tilde_first_order;
        res.log_negativity(i, j) = eval.report.log_negativity;
        res.commutator_defect(i, j) = eval.commutator.defect;
      } catch (const Error& e) {
        std::lock_guard lock(failure_mutex);
        failures.emplace_back(idx, fmt::format("tau={:.6g} t={:.6g}: {}", res.tau[i], res.t[j], e.what()));
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = static_cast<int>(std::min<Eigen::Index>(workers, std::max<Eigen::Index>(total, 1)));
    for (int w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }

  std::sort(failures.begin(), failures.end());
  res.failures = static_cast<int>(failures.size());
  for (std::size_t i = 0; i < failures.size() && i < kKeptMessages; ++i) {
    res.failure_messages.push_back(failures[i].second);
  }
  return res;
}

std::string sweep_csv(const SweepResult& res) {
  std::string out = fmt::format("# relcav {} config {}\n", res.version, res.config_hash);
  out += "tau,t,nu_tilde_1st_order,log_negativity,commutator_defect\n";
  for (std::size_t i = 0; i < res.tau.size(); ++i) {
    for (std::size_t j = 0; j < res.t.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      out += fmt::format("{},{},{},{},{}\n", cell(res.tau[i]), cell(res.t[j]), cell(res.nu_tilde_first_order(r, c)),
                         cell(res.log_negativity(r, c)), cell(res.commutator_defect(r, c)));
    }
  }
  return out;
}

void write_sweep_csv(const SweepResult& res, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << sweep_csv(res);
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

}  // namespace relcav::cli
