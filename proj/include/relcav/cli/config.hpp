#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "relcav/trajectory.hpp"

namespace relcav::cli {

/// Raised for unreadable, malformed or physically invalid configs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when an output file cannot be written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct SweepAxis {
  std::string variable;  // "tau" or "t"
  double min = 0.0;
  double max = 0.0;
  int points = 0;

  /// Inclusive, evenly spaced grid.
  std::vector<double> values() const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;  // one or two entries
  bool heatmap = true;
};

struct NumericSettings {
  int n_max = 40;
  double quadrature_tolerance = 1e-12;
  double unitarity_tolerance = 1e-6;
  double max_symplectic_defect = 1e-6;
};

struct RunConfig {
  std::filesystem::path source;
  double length = 1.0;
  double h = 1e-4;
  double mass = 0.0;
  ModePair modes{1, 2};
  /// Named sample scenario; when empty, `segments` holds the trajectory.
  std::optional<SampleScenarioParams> scenario;
  std::vector<TrajectorySegment> segments;
  int repetitions = 1;
  std::optional<SweepSpec> sweep;
  std::vector<int> resonance_orders{1, 2};
  NumericSettings numerics;
  std::filesystem::path out_dir = "relcav-out";
  std::vector<std::string> warnings;

  CavityGeometry geometry() const;
  Trajectory trajectory() const;
  PipelineSettings pipeline() const;
  OracleSettings oracle() const;
  /// The scenario with tau and t replaced.
  SampleScenarioParams scenario_at(double tau, double t) const;
};

/// Parses and validates a YAML config; unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& source = "<string>");

/// Canonical YAML of the fully defaulted config.
std::string echo_config(const RunConfig& cfg);

/// FNV-1a of the canonical echo, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

std::string tool_version();

}  // namespace relcav::cli
