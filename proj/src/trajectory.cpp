#include "relcav/trajectory.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace relcav {
namespace {

using std::numbers::pi;

void require_duration(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw DomainError(fmt::format("segment duration must be finite and >= 0, got {}", d));
  }
}

int sign_power(int n) { return n % 2 == 0 ? 1 : -1; }

}  // namespace

TrajectorySegment TrajectorySegment::coast(double duration) {
  require_duration(duration);
  return {Kind::coast, duration, 0.0};
}

TrajectorySegment TrajectorySegment::burn(double duration, double h_signed) {
  require_duration(duration);
  if (!(std::abs(h_signed) < 2.0)) {
    throw DomainError(fmt::format("burn strength must satisfy |h| < 2, got {}", h_signed));
  }
  return {Kind::burn, duration, h_signed};
}

Trajectory::Trajectory(std::vector<TrajectorySegment> segments, int repetitions)
    : segments_(std::move(segments)), repetitions_(repetitions) {
  if (segments_.empty()) throw DomainError("trajectory needs at least one segment");
  if (repetitions_ < 1) {
    throw DomainError(fmt::format("repetitions must be >= 1, got {}", repetitions_));
  }
}

double Trajectory::total_time() const {
  double total = 0.0;
  for (const auto& s : segments_) total += s.duration();
  return total;
}

double Trajectory::max_abs_h() const {
  double worst = 0.0;
  for (const auto& s : segments_) worst = std::max(worst, std::abs(s.h_signed()));
  return worst;
}

Trajectory Trajectory::scaled(double factor) const {
  std::vector<TrajectorySegment> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) {
    out.push_back(s.kind() == TrajectorySegment::Kind::burn
                      ? TrajectorySegment::burn(s.duration(), factor * s.h_signed())
                      : s);
  }
  return Trajectory(std::move(out), repetitions_);
}

void SampleScenarioParams::validate() const {
  require_duration(tau);
  require_duration(t);
  if (!(y > 0.0)) throw DomainError(fmt::format("burn ratio y must be > 0, got {}", y));
  if (epsilon != 1 && epsilon != -1) {
    throw DomainError(fmt::format("direction flag epsilon must be +1 or -1, got {}", epsilon));
  }
  if (!(h >= 0.0 && h < 2.0) || !(y * h < 2.0)) {
    throw DomainError(fmt::format("burn strengths h={} and y h={} must lie in [0, 2)", h, y * h));
  }
  if (repetitions < 1) throw DomainError("repetitions must be >= 1");
  if (resonance_order < 1) throw DomainError("resonance order n must be >= 1");
}

Trajectory SampleScenarioParams::trajectory() const {
  validate();
  return Trajectory({TrajectorySegment::burn(tau, h), TrajectorySegment::coast(t),
                     TrajectorySegment::burn(tau, epsilon * y * h), TrajectorySegment::coast(t)},
                    repetitions);
}

SegmentTransform build_segment_symplectic(const Trajectory& trajectory, const CavityGeometry& g,
                                          const ModePair& modes, CoefficientCache& cache,
                                          const PipelineSettings& settings) {
  const int n_max = settings.n_max;
  if (std::max(modes.first().value(), modes.second().value()) > n_max) {
    throw DomainError(fmt::format("modes ({}, {}) exceed n_max = {}", modes.first().value(),
                                  modes.second().value(), n_max));
  }
  SegmentTransform out{identity_block(n_max), {}, {}};
  const double worst_h = trajectory.max_abs_h();
  if (worst_h > settings.max_h) {
    throw DomainError(fmt::format("|h| = {} exceeds the perturbative limit {}", worst_h,
                                  settings.max_h));
  }
  if (worst_h > settings.warn_h) {
    out.warnings.push_back(fmt::format(
        "|h| = {} is above {}: first-order statements lose accuracy", worst_h, settings.warn_h));
  }

  for (const auto& segment : trajectory.segments()) {
    const double h = segment.h_signed();
    if (segment.kind() == TrajectorySegment::Kind::coast || h == 0.0) {
      out.block = compose(out.block,
                          free_evolution_block(g, segment.duration(), Chart::inertial, n_max));
      continue;
    }
    if (!g.massless()) throw UnsupportedError("accelerated segments require a massless field");
    const BogoliubovBlock junction = cache.junction(g.length(), h, n_max);
    const BogoliubovBlock evolution =
        free_evolution_block(g.with_h(std::abs(h)), segment.duration(), Chart::accelerated, n_max);
    out.block = compose(compose(compose(out.block, junction), evolution), invert(junction));
  }
  out.two_mode = symplectic_from_bogoliubov(out.block, {modes.first(), modes.second()},
                                            settings.max_symplectic_defect);
  return out;
}

SymplecticOp repeat(const SymplecticOp& s, int n) {
  return {matrix_power(s.matrix, n), s.modes, s.truncation_defect};
}

BogoliubovBlock repeat(const BogoliubovBlock& b, int n) {
  if (n < 1) throw DomainError(fmt::format("repetition count must be >= 1, got {}", n));
  BogoliubovBlock out = b;
  for (int i = 1; i < n; ++i) out = compose(out, b);
  return out;
}

double resonance_time(const ModePair& modes, const CavityGeometry& g, int n) {
  if (n < 1) throw DomainError(fmt::format("resonance order must be >= 1, got {}", n));
  return 2.0 * n * pi /
         (minkowski_frequency(modes.first(), g) + minkowski_frequency(modes.second(), g));
}

double mode_coupling(const ModePair& modes) {
  const double k = modes.first().value();
  const double kp = modes.second().value();
  const double parity = modes.oddly_separated() ? 2.0 : 0.0;
  return std::sqrt(k * kp) * parity / (pi * pi * std::pow(k + kp, 3));
}

bool has_first_order_resonance(const ModePair& modes) { return mode_coupling(modes) != 0.0; }

double commutator_defect(const RealMatrix& s) {
  return (s.transpose() * s - s * s.transpose()).norm();
}

Complex commutator_w(const ModePair& modes, const CavityGeometry& g, double period, Complex beta1) {
  const Complex gk = std::polar(1.0, minkowski_frequency(modes.first(), g) * period);
  const Complex gkp = std::polar(1.0, minkowski_frequency(modes.second(), g) * period);
  return 2.0 * (std::conj(gk) - gkp) * beta1;
}

CommutatorReport commutator_report(const SegmentTransform& transform, const ModePair& modes,
                                   const CavityGeometry& g, double period) {
  CommutatorReport out;
  out.defect = commutator_defect(transform.two_mode.matrix);
  out.w = commutator_w(modes, g, period,
                       transform.block.beta(modes.first().offset(), modes.second().offset()));
  out.predicted_defect = 2.0 * std::abs(out.w);
  return out;
}

Complex first_order_beta(const Trajectory& trajectory, const CavityGeometry& g,
                         const ModePair& modes, CoefficientCache& cache,
                         const PipelineSettings& settings) {
  const auto beta = [&](const Trajectory& tr) {
    return build_segment_symplectic(tr, g, modes, cache, settings)
        .block.beta(modes.first().offset(), modes.second().offset());
  };
  // B(s) = s b1 + s^2 b2 + O(s^3)  =>  4 B(1/2) - B(1) = b1 + O(s^3).
  return 4.0 * beta(trajectory.scaled(0.5)) - beta(trajectory);
}

double sample_scenario_B1(const SampleScenarioParams& p, const CavityGeometry& g) {
  p.validate();
  const double wk = minkowski_frequency(p.modes.first(), g);
  const double wkp = minkowski_frequency(p.modes.second(), g);
  const Complex gg = std::polar(1.0, -(wk + wkp) * p.tau);  // g_k* g_k'*
  const Complex ff = std::polar(1.0, -(wk + wkp) * p.t);    // f_k* f_k'*
  return mode_coupling(p.modes) * std::abs(1.0 - gg) *
         std::abs(1.0 + static_cast<double>(p.epsilon) * p.y * gg * ff) * p.h;
}

double sample_scenario_logneg(const SampleScenarioParams& p, const CavityGeometry& g) {
  p.validate();
  const int n = p.resonance_order;
  const double period = resonance_time(p.modes, g, n);
  const double total = 2.0 * (p.tau + p.t);
  if (std::abs(total - period) > 1e-9 * std::max(1.0, period)) {
    throw OffResonanceError(fmt::format(
        "closed-form log-negativity holds only at resonance: 2(tau+t) = {} but T_{} = {}", total, n,
        period));
  }
  const double sum = minkowski_frequency(p.modes.first(), g) + minkowski_frequency(p.modes.second(), g);
  const double s = sign_power(n);
  const Complex coast_factor = 1.0 - s * std::polar(1.0, sum * p.t);
  const double burn_factor = 1.0 + s * p.epsilon * p.y;
  return p.repetitions * mode_coupling(p.modes) * std::abs(coast_factor * burn_factor) * p.h;
}

std::vector<GrowthPoint> predict_linear_growth(const SymplecticOp& s, int max_repetitions) {
  if (max_repetitions < 1) throw DomainError("max_repetitions must be >= 1");
  std::vector<GrowthPoint> out;
  RealMatrix power = s.matrix;
  double first = 0.0;
  for (int n = 1; n <= max_repetitions; ++n) {
    if (n > 1) power = power * s.matrix;
    const double measured = 1.0 - smallest_pt_eigenvalue(power.transpose() * power);
    if (n == 1) first = measured;
    out.push_back({n, measured, n * first});
  }
  return out;
}

TrajectoryEvaluation evaluate_trajectory(const Trajectory& trajectory, const CavityGeometry& g,
                                         const ModePair& modes, CoefficientCache& cache,
                                         const PipelineSettings& settings) {
  TrajectoryEvaluation out;
  out.transform = build_segment_symplectic(trajectory, g, modes, cache, settings);
  const int n = trajectory.repetitions();
  out.report = entanglement_report(out.transform.two_mode, n);
  out.commutator = commutator_report(out.transform, modes, g, trajectory.total_time());
  const BogoliubovBlock total = repeat(out.transform.block, n);
  out.beta_after_repetitions = std::abs(total.beta(modes.first().offset(), modes.second().offset()));
  out.mean_excitations_k = mean_excitations(total, modes.first());
  out.mean_excitations_kp = mean_excitations(total, modes.second());
  return out;
}

}  // namespace relcav
