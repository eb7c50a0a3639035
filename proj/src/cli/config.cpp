#include "relcav/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#ifndef RELCAV_VERSION
#define RELCAV_VERSION "0.0.0"
#endif

namespace relcav::cli {
namespace {

std::string where(const YAML::Node& node, const std::string& key) {
  const auto mark = node.Mark();
  if (mark.line < 0) return fmt::format("'{}'", key);
  return fmt::format("'{}' (line {})", key, mark.line + 1);
}

void reject_unknown(const YAML::Node& node, const std::string& path, std::set<std::string> allowed) {
  if (!node.IsMap()) throw ConfigError(fmt::format("{} must be a mapping", where(node, path)));
  for (const auto& item : node) {
    const auto key = item.first.as<std::string>();
    if (!allowed.contains(key)) {
      const std::string full = path.empty() ? key : path + "." + key;
      throw ConfigError(fmt::format("unknown key {}", where(item.first, full)));
    }
  }
}

// Accepts plain numbers and simple fractions such as "2/3".
double number(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(fmt::format("{} must be a number", where(node, key)));
  const auto text = node.Scalar();
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      std::size_t used_num = 0;
      std::size_t used_den = 0;
      const double num = std::stod(text.substr(0, slash), &used_num);
      const double den = std::stod(text.substr(slash + 1), &used_den);
      if (used_num != slash || used_den != text.size() - slash - 1 || den == 0.0) throw std::invalid_argument(text);
      return num / den;
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", where(node, key), text));
  }
}

int integer(const YAML::Node& node, const std::string& key) {
  const double v = number(node, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError(fmt::format("{} must be an integer, got {}", where(node, key), node.Scalar()));
  }
  return static_cast<int>(v);
}

bool boolean(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("{} must be true or false", where(node, key)));
  }
}

template <typename F>
void optional_field(const YAML::Node& parent, const char* name, const std::string& path, F&& apply) {
  if (const auto node = parent[name]) apply(node, path.empty() ? std::string(name) : path + "." + name);
}

SweepAxis parse_axis(const YAML::Node& node, const std::string& name, const std::string& path) {
  reject_unknown(node, path, {"min", "max", "points"});
  SweepAxis axis;
  axis.variable = name;
  if (!node["min"] || !node["max"] || !node["points"]) {
    throw ConfigError(fmt::format("{} needs min, max and points", where(node, path)));
  }
  axis.min = number(node["min"], path + ".min");
  axis.max = number(node["max"], path + ".max");
  axis.points = integer(node["points"], path + ".points");
  if (axis.points < 1) throw ConfigError(fmt::format("{}.points must be >= 1", path));
  if (axis.min < 0.0 || axis.max < axis.min) {
    throw ConfigError(fmt::format("{} must satisfy 0 <= min <= max (durations)", path));
  }
  return axis;
}

TrajectorySegment parse_segment(const YAML::Node& node, const std::string& path) {
  reject_unknown(node, path, {"coast", "burn", "h"});
  const bool coast = bool(node["coast"]);
  const bool burn = bool(node["burn"]);
  if (coast == burn) throw ConfigError(fmt::format("{} needs exactly one of coast or burn", where(node, path)));
  if (coast) {
    if (node["h"]) throw ConfigError(fmt::format("{}: a coast has no h", where(node, path)));
    return TrajectorySegment::coast(number(node["coast"], path + ".coast"));
  }
  if (!node["h"]) throw ConfigError(fmt::format("{}: a burn needs h", where(node, path)));
  return TrajectorySegment::burn(number(node["burn"], path + ".burn"), number(node["h"], path + ".h"));
}

void check_perturbative(RunConfig& cfg, double h, const std::string& what) {
  if (std::abs(h) > 0.1) {
    cfg.warnings.push_back(fmt::format(
        "{} |h|={} is outside the perturbative regime (|h| <= 0.1); the pipeline will refuse it", what, h));
  } else if (std::abs(h) > 0.01) {
    cfg.warnings.push_back(fmt::format("{} |h|={} exceeds 0.01; first-order results lose accuracy", what, h));
  }
}

void build(RunConfig& cfg, const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("config is empty");
  reject_unknown(root, "", {"geometry", "modes", "trajectory", "repetitions", "sweep", "resonance", "numerics", "output"});

  if (!root["geometry"]) throw ConfigError("missing 'geometry'");
  const auto geo = root["geometry"];
  reject_unknown(geo, "geometry", {"length", "h", "x_a", "x_b", "mass"});
  optional_field(geo, "mass", "geometry", [&](auto n, auto p) { cfg.mass = number(n, p); });
  const bool by_walls = geo["x_a"] || geo["x_b"];
  if (by_walls) {
    if (!geo["x_a"] || !geo["x_b"] || geo["length"] || geo["h"]) {
      throw ConfigError("geometry takes either (length, h) or (x_a, x_b)");
    }
    const auto g = CavityGeometry::from_walls(number(geo["x_a"], "geometry.x_a"),
                                              number(geo["x_b"], "geometry.x_b"), cfg.mass);
    cfg.length = g.length();
    cfg.h = g.h();
  } else {
    optional_field(geo, "length", "geometry", [&](auto n, auto p) { cfg.length = number(n, p); });
    optional_field(geo, "h", "geometry", [&](auto n, auto p) { cfg.h = number(n, p); });
  }
  (void)cfg.geometry();
  check_perturbative(cfg, cfg.h, "geometry");

  if (const auto modes = root["modes"]) {
    if (!modes.IsSequence() || modes.size() != 2) {
      throw ConfigError(fmt::format("{} must be a list of two mode numbers", where(modes, "modes")));
    }
    const int k = integer(modes[0], "modes[0]");
    const int kp = integer(modes[1], "modes[1]");
    if (k < 1 || kp < 1) throw ConfigError("mode pair invariant violated: mode numbers must be >= 1");
    if (k == kp) throw ConfigError(fmt::format("mode pair invariant violated: k != k' required, got k = k' = {}", k));
    cfg.modes = ModePair(k, kp);
  }
  optional_field(root, "repetitions", "", [&](auto n, auto p) { cfg.repetitions = integer(n, p); });
  if (cfg.repetitions < 1) throw ConfigError("repetitions must be >= 1");

  if (!root["trajectory"]) throw ConfigError("missing 'trajectory'");
  const auto traj = root["trajectory"];
  reject_unknown(traj, "trajectory", {"scenario", "segments"});
  if (bool(traj["scenario"]) == bool(traj["segments"])) {
    throw ConfigError("trajectory needs exactly one of 'scenario' or 'segments'");
  }
  if (const auto sc = traj["scenario"]) {
    reject_unknown(sc, "trajectory.scenario", {"tau", "t", "y", "epsilon"});
    SampleScenarioParams p;
    p.h = cfg.h;
    p.modes = cfg.modes;
    p.repetitions = cfg.repetitions;
    optional_field(sc, "tau", "trajectory.scenario", [&](auto n, auto path) { p.tau = number(n, path); });
    optional_field(sc, "t", "trajectory.scenario", [&](auto n, auto path) { p.t = number(n, path); });
    optional_field(sc, "y", "trajectory.scenario", [&](auto n, auto path) { p.y = number(n, path); });
    optional_field(sc, "epsilon", "trajectory.scenario", [&](auto n, auto path) { p.epsilon = integer(n, path); });
    p.validate();
    check_perturbative(cfg, p.y * p.h, "second burn");
    cfg.scenario = p;
  } else {
    const auto segs = traj["segments"];
    if (!segs.IsSequence() || segs.size() == 0) throw ConfigError("trajectory.segments must be a non-empty list");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const auto path = fmt::format("trajectory.segments[{}]", i);
      cfg.segments.push_back(parse_segment(segs[i], path));
      if (cfg.segments.back().kind() == TrajectorySegment::Kind::burn) {
        check_perturbative(cfg, cfg.segments.back().h_signed(), path);
      }
    }
  }

  if (const auto sw = root["sweep"]) {
    reject_unknown(sw, "sweep", {"tau", "t", "heatmap"});
    SweepSpec spec;
    if (sw["tau"]) spec.axes.push_back(parse_axis(sw["tau"], "tau", "sweep.tau"));
    if (sw["t"]) spec.axes.push_back(parse_axis(sw["t"], "t", "sweep.t"));
    optional_field(sw, "heatmap", "sweep", [&](auto n, auto p) { spec.heatmap = boolean(n, p); });
    if (spec.axes.empty()) throw ConfigError("sweep must name tau, t or both");
    if (!cfg.scenario) throw ConfigError("sweep requires a trajectory.scenario (tau and t are scenario durations)");
    cfg.sweep = spec;
  }

  if (const auto res = root["resonance"]) {
    reject_unknown(res, "resonance", {"orders"});
    if (const auto orders = res["orders"]) {
      if (!orders.IsSequence() || orders.size() == 0) throw ConfigError("resonance.orders must be a non-empty list");
      cfg.resonance_orders.clear();
      for (std::size_t i = 0; i < orders.size(); ++i) {
        const int n = integer(orders[i], fmt::format("resonance.orders[{}]", i));
        if (n < 1) throw ConfigError("resonance orders must be >= 1");
        cfg.resonance_orders.push_back(n);
      }
    }
  }

  if (const auto num = root["numerics"]) {
    reject_unknown(num, "numerics", {"n_max", "quadrature_tolerance", "unitarity_tolerance", "max_symplectic_defect"});
    auto& s = cfg.numerics;
    optional_field(num, "n_max", "numerics", [&](auto n, auto p) { s.n_max = integer(n, p); });
    optional_field(num, "quadrature_tolerance", "numerics", [&](auto n, auto p) { s.quadrature_tolerance = number(n, p); });
    optional_field(num, "unitarity_tolerance", "numerics", [&](auto n, auto p) { s.unitarity_tolerance = number(n, p); });
    optional_field(num, "max_symplectic_defect", "numerics", [&](auto n, auto p) { s.max_symplectic_defect = number(n, p); });
  }
  if (cfg.numerics.n_max < 2) throw ConfigError("numerics.n_max must be >= 2");
  if (2 * std::max(cfg.modes.first().value(), cfg.modes.second().value()) > cfg.numerics.n_max) {
    throw ConfigError(fmt::format("numerics.n_max={} must be at least twice the largest mode of interest",
                                  cfg.numerics.n_max));
  }
  if (!(cfg.numerics.quadrature_tolerance > 0.0) || !(cfg.numerics.unitarity_tolerance > 0.0) ||
      !(cfg.numerics.max_symplectic_defect > 0.0)) {
    throw ConfigError("numerics tolerances must be positive");
  }

  if (const auto out = root["output"]) {
    reject_unknown(out, "output", {"dir"});
    optional_field(out, "dir", "output", [&](auto n, auto) { cfg.out_dir = n.template as<std::string>(); });
  }
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = min;
    return v;
  }
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = i + 1 == points ? max : min + i * step;
  return v;
}

CavityGeometry RunConfig::geometry() const { return CavityGeometry::from_length(length, h, mass); }

Trajectory RunConfig::trajectory() const {
  if (scenario) return scenario->trajectory();
  return Trajectory(segments, repetitions);
}

PipelineSettings RunConfig::pipeline() const {
  PipelineSettings s;
  s.n_max = numerics.n_max;
  s.max_symplectic_defect = numerics.max_symplectic_defect;
  return s;
}

OracleSettings RunConfig::oracle() const {
  OracleSettings s;
  s.quadrature.abs_tolerance = numerics.quadrature_tolerance;
  s.unitarity_tolerance = numerics.unitarity_tolerance;
  return s;
}

SampleScenarioParams RunConfig::scenario_at(double tau, double t) const {
  if (!scenario) throw ConfigError("config has no sample scenario");
  SampleScenarioParams p = *scenario;
  p.tau = tau;
  p.t = t;
  return p;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  RunConfig cfg;
  cfg.source = source;
  try {
    build(cfg, YAML::Load(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(fmt::format("{}: parse error at line {}, column {}: {}", source.string(), e.mark.line + 1,
                                  e.mark.column + 1, e.msg));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source.string(), e.what()));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("{}: invalid value: {}", source.string(), e.what()));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}: {}", source.string(), e.what()));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string echo_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap << YAML::Key << "length" << YAML::Value
      << cfg.length << YAML::Key << "h" << YAML::Value << cfg.h << YAML::Key << "mass" << YAML::Value << cfg.mass
      << YAML::EndMap;
  out << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq << cfg.modes.first().value()
      << cfg.modes.second().value() << YAML::EndSeq;
  out << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  if (cfg.scenario) {
    const auto& p = *cfg.scenario;
    out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap << YAML::Key << "tau" << YAML::Value << p.tau
        << YAML::Key << "t" << YAML::Value << p.t << YAML::Key << "y" << YAML::Value << p.y << YAML::Key
        << "epsilon" << YAML::Value << p.epsilon << YAML::EndMap;
  } else {
    out << YAML::Key << "segments" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.segments) {
      out << YAML::Flow << YAML::BeginMap;
      if (s.kind() == TrajectorySegment::Kind::coast) {
        out << YAML::Key << "coast" << YAML::Value << s.duration();
      } else {
        out << YAML::Key << "burn" << YAML::Value << s.duration() << YAML::Key << "h" << YAML::Value << s.h_signed();
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "repetitions" << YAML::Value << cfg.repetitions;
  if (cfg.sweep) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    for (const auto& a : cfg.sweep->axes) {
      out << YAML::Key << a.variable << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min"
          << YAML::Value << a.min << YAML::Key << "max" << YAML::Value << a.max << YAML::Key << "points"
          << YAML::Value << a.points << YAML::EndMap;
    }
    out << YAML::Key << "heatmap" << YAML::Value << cfg.sweep->heatmap << YAML::EndMap;
  }
  out << YAML::Key << "resonance" << YAML::Value << YAML::BeginMap << YAML::Key << "orders" << YAML::Value
      << YAML::Flow << cfg.resonance_orders << YAML::EndMap;
  const auto& n = cfg.numerics;
  out << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap << YAML::Key << "n_max" << YAML::Value << n.n_max
      << YAML::Key << "quadrature_tolerance" << YAML::Value << n.quadrature_tolerance << YAML::Key
      << "unitarity_tolerance" << YAML::Value << n.unitarity_tolerance << YAML::Key << "max_symplectic_defect"
      << YAML::Value << n.max_symplectic_defect << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap << YAML::Key << "dir" << YAML::Value
      << cfg.out_dir.string() << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  // Where results are written does not change them.
  RunConfig physics = cfg;
  physics.out_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : echo_config(physics)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string tool_version() { return RELCAV_VERSION; }

}  // namespace relcav::cli
