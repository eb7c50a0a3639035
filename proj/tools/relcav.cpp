// relcav: Bogoliubov coefficients, trajectory evaluation, parameter sweeps and
// resonance reports for a rigid cavity on piecewise-accelerated trajectories.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "relcav/cli/config.hpp"
#include "relcav/cli/heatmap.hpp"
#include "relcav/cli/resonance.hpp"
#include "relcav/cli/sweep.hpp"
#include "relcav/cli/validate.hpp"

namespace fs = std::filesystem;
using namespace relcav;
using namespace relcav::cli;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kConfig = 2, kNumeric = 3, kIo = 4 };

struct Common {
  std::string config;
  std::string out;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int nmax = 0;
  bool no_cache = false;
};

void add_common(CLI::App* app, Common& c, bool needs_config = true) {
  auto* opt = app->add_option("--config", c.config, "YAML run config")->check(CLI::ExistingFile);
  if (needs_config) opt->required();
  app->add_option("--out", c.out, "output directory (overrides output.dir)");
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--nmax", c.nmax, "mode truncation (overrides numerics.n_max)")->check(CLI::PositiveNumber);
  app->add_flag("--no-cache", c.no_cache, "do not read or write the on-disk coefficient cache");
}

RunConfig load(const Common& c) {
  RunConfig cfg = load_config(c.config);
  if (c.nmax > 0) {
    if (2 * std::max(cfg.modes.first().value(), cfg.modes.second().value()) > c.nmax) {
      throw ConfigError(fmt::format("--nmax {} must be at least twice the largest mode of interest", c.nmax));
    }
    cfg.numerics.n_max = c.nmax;
  }
  if (!c.out.empty()) cfg.out_dir = c.out;
  for (const auto& w : cfg.warnings) fmt::print(stderr, "warning: {}\n", w);
  return cfg;
}

CoefficientCache make_cache(const RunConfig& cfg, const Common& c) {
  std::optional<fs::path> dir;
  if (!c.no_cache) dir = default_cache_directory();
  return CoefficientCache(dir, cfg.oracle());
}

fs::path prepare_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", cfg.out_dir.string(), ec.message()));
  return cfg.out_dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("short write to {}", path.string()));
}

std::string header(const RunConfig& cfg) {
  return fmt::format("# relcav {} config {}\n", tool_version(), config_hash(cfg));
}

nlohmann::json provenance(const RunConfig& cfg) {
  return {{"version", tool_version()}, {"config_hash", config_hash(cfg)}, {"config", echo_config(cfg)}};
}

int run_coeffs(const Common& c) {
  const RunConfig cfg = load(c);
  auto cache = make_cache(cfg, c);
  const auto g = cfg.geometry();
  if (g.h() == 0.0) throw ConfigError("coeffs needs a nonzero geometry.h");
  const int n_max = cfg.numerics.n_max;
  const auto block = cache.junction(g.length(), g.h(), n_max);
  const double defect = unitarity_defect(block);

  std::string csv = header(cfg) + "k,n,alpha_re,alpha_im,beta_re,beta_im\n";
  for (int k = 0; k < n_max; ++k) {
    for (int n = 0; n < n_max; ++n) {
      csv += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", k + 1, n + 1, block.alpha(k, n).real(),
                         block.alpha(k, n).imag(), block.beta(k, n).real(), block.beta(k, n).imag());
    }
  }
  const auto dir = prepare_out(cfg);
  write_text(dir / "coeffs.csv", csv);

  const auto& kp = cfg.modes;
  const Complex b = block.beta(kp.first().offset(), kp.second().offset());
  fmt::print("junction L={} h={} n_max={}: unitarity defect {:.3e}\n", g.length(), g.h(), n_max, defect);
  fmt::print("beta_{}{} = {:.12e}{:+.12e}i, |beta|/h = {:.10e}, c_kk' = {:.10e}\n", kp.first().value(),
             kp.second().value(), b.real(), b.imag(), std::abs(b) / g.h(), mode_coupling(kp));
  fmt::print("cache: {} ({} from disk, {} computed)\nwrote {}\n",
             cache.directory() ? cache.directory()->string() : std::string("disabled"), cache.disk_hits(),
             cache.computed(), (dir / "coeffs.csv").string());
  return defect <= cfg.numerics.unitarity_tolerance ? kOk : kNumeric;
}

int run_evolve(const Common& c) {
  const RunConfig cfg = load(c);
  auto cache = make_cache(cfg, c);
  const auto eval = evaluate_trajectory(cfg.trajectory(), cfg.geometry(), cfg.modes, cache, cfg.pipeline());
  for (const auto& w : eval.transform.warnings) fmt::print(stderr, "warning: {}\n", w);
  const auto& r = eval.report;

  nlohmann::json j = provenance(cfg);
  j["nu_tilde"] = r.nu_tilde;
  j["nu_tilde_first_order"] = r.nu_tilde_first_order;
  j["log_negativity"] = r.log_negativity;
  j["beta_kkp_after_repetitions"] = eval.beta_after_repetitions;
  j["squeezer"] = {{"r", r.squeezing_r}, {"psi_k", r.psi_k}, {"psi_kp", r.psi_kp}, {"residual", r.squeezer_residual}};
  j["mean_excitations"] = {{"k", eval.mean_excitations_k}, {"kp", eval.mean_excitations_kp}};
  j["commutator"] = {{"defect", eval.commutator.defect},
                     {"w_abs", std::abs(eval.commutator.w)},
                     {"predicted_defect", eval.commutator.predicted_defect}};
  j["truncation_defect"] = eval.transform.two_mode.truncation_defect;
  j["unitarity_defect"] = unitarity_defect(eval.transform.block);
  const auto dir = prepare_out(cfg);
  write_text(dir / "evolve.json", j.dump(2) + "\n");

  fmt::print("nu~ = {:.17g}\nnu~(1) = {:.6e}\nE_N = {:.6e}\nN|B_kk'| = {:.6e}\n", r.nu_tilde,
             r.nu_tilde_first_order, r.log_negativity, eval.beta_after_repetitions);
  fmt::print("squeezer r = {:.6e}, psi = ({:.6f}, {:.6f}), residual {:.3e}\n", r.squeezing_r, r.psi_k, r.psi_kp,
             r.squeezer_residual);
  fmt::print("<N_k> = {:.6e}, <N_k'> = {:.6e}\ncommutator defect {:.3e} (first-order prediction {:.3e})\nwrote {}\n",
             eval.mean_excitations_k, eval.mean_excitations_kp, eval.commutator.defect,
             eval.commutator.predicted_defect, (dir / "evolve.json").string());
  return kOk;
}

int run_sweep_cmd(const Common& c) {
  const RunConfig cfg = load(c);
  if (!cfg.sweep) throw ConfigError("config has no sweep section");
  auto cache = make_cache(cfg, c);
  const auto res = run_sweep(cfg, cache, c.workers);
  const auto dir = prepare_out(cfg);
  write_sweep_csv(res, dir / "sweep.csv");
  fmt::print("wrote {}\n", (dir / "sweep.csv").string());
  if (cfg.sweep->heatmap && res.tau.size() > 1 && res.t.size() > 1) {
    render_heatmap(res, dir / "sweep.svg");
    fmt::print("wrote {}\n", (dir / "sweep.svg").string());
  }
  nlohmann::json meta = provenance(cfg);
  meta["timestamp"] = res.timestamp;
  meta["grid"] = {{"tau_points", res.tau.size()}, {"t_points", res.t.size()}};
  meta["unitarity_defect"] = res.unitarity_defect;
  meta["failures"] = res.failures;
  meta["failure_messages"] = res.failure_messages;
  write_text(dir / "sweep_meta.json", meta.dump(2) + "\n");

  if (res.failures > 0) {
    fmt::print(stderr, "{} of {} grid points failed (NaN rows):\n", res.failures, res.tau.size() * res.t.size());
    for (const auto& m : res.failure_messages) fmt::print(stderr, "  {}\n", m);
    return kNumeric;
  }
  return kOk;
}

int run_resonance(const Common& c) {
  const RunConfig cfg = load(c);
  auto cache = make_cache(cfg, c);
  const auto report = resonance_report(cfg, cfg.resonance_orders, cache);
  fmt::print("{}", format_resonance_report(report));
  const auto dir = prepare_out(cfg);
  write_text(dir / "resonance.csv", resonance_csv(report, header(cfg)));
  fmt::print("wrote {}\n", (dir / "resonance.csv").string());
  return kOk;
}

int run_validate(const Common& c) {
  const RunConfig cfg = load(c);
  auto cache = make_cache(cfg, c);
  fmt::print("# config {} (hash {})\n{}", cfg.source.string(), config_hash(cfg), echo_config(cfg));
  bool all = true;
  for (const auto& r : validate_config(cfg, cache)) {
    fmt::print("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
    all = all && r.passed;
  }
  return all ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relcav: entanglement from relativistic cavity motion"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Common common;
  auto* coeffs = app.add_subcommand("coeffs", "compute and cache the junction Bogoliubov block");
  auto* evolve = app.add_subcommand("evolve", "evaluate one trajectory");
  auto* sweep = app.add_subcommand("sweep", "evaluate a (tau, t) grid; CSV and heatmap");
  auto* resonance = app.add_subcommand("resonance", "resonance times and linear-growth report");
  auto* validate = app.add_subcommand("validate", "run the invariant suite on a config");
  for (auto* sub : {coeffs, evolve, sweep, resonance, validate}) add_common(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*coeffs) return run_coeffs(common);
    if (*evolve) return run_evolve(common);
    if (*sweep) return run_sweep_cmd(common);
    if (*resonance) return run_resonance(common);
    if (*validate) return run_validate(common);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const IoError& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kIo;
  } catch (const CacheError& e) {
    fmt::print(stderr, "cache error: {}\n", e.what());
    return kIo;
  } catch (const fs::filesystem_error& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return kIo;
  } catch (const NumericError& e) {
    fmt::print(stderr, "numeric failure: {} (achieved {:.3e})\n", e.what(), e.achieved());
    return kNumeric;
  } catch (const DomainError& e) {
    fmt::print(stderr, "invalid input: {}\n", e.what());
    return kConfig;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumeric;
  }
  return kUsage;
}
