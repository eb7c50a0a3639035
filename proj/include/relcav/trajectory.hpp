#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relcav/coefficient_cache.hpp"
#include "relcav/symplectic.hpp"

namespace relcav {

/// Piece of a cavity worldtube: free coasting, or uniform acceleration with
/// signed strength h (sign = direction) for a centre proper time.
class TrajectorySegment {
 public:
  enum class Kind { coast, burn };

  static TrajectorySegment coast(double duration);
  static TrajectorySegment burn(double duration, double h_signed);

  Kind kind() const noexcept { return kind_; }
  double duration() const noexcept { return duration_; }
  /// Zero for coasts.
  double h_signed() const noexcept { return h_signed_; }

 private:
  TrajectorySegment(Kind kind, double duration, double h) : kind_(kind), duration_(duration), h_signed_(h) {}
  Kind kind_;
  double duration_;
  double h_signed_;
};

/// One period of motion, applied in list order, repeated N times.
class Trajectory {
 public:
  Trajectory(std::vector<TrajectorySegment> segments, int repetitions = 1);

  const std::vector<TrajectorySegment>& segments() const noexcept { return segments_; }
  int repetitions() const noexcept { return repetitions_; }
  double total_time() const;
  double max_abs_h() const;
  /// Same motion with every burn strength multiplied by `factor`.
  Trajectory scaled(double factor) const;

 private:
  std::vector<TrajectorySegment> segments_;
  int repetitions_;
};

/// Two equal-duration burns (h, then epsilon y h), each followed by a coast.
struct SampleScenarioParams {
  double tau = 0.0;
  double t = 0.0;
  double h = 1e-4;
  double y = 1.0;
  int epsilon = 1;
  ModePair modes{1, 2};
  int repetitions = 1;
  /// Resonance order used by the closed-form log-negativity.
  int resonance_order = 1;

  void validate() const;
  Trajectory trajectory() const;
};

struct PipelineSettings {
  int n_max = 40;
  /// Largest raw symplecticity defect accepted for the two-mode sub-block.
  double max_symplectic_defect = 1e-6;
  double warn_h = 0.01;
  double max_h = 0.1;
};

/// One period of a trajectory: the truncated Bogoliubov block and its two-mode symplectic op.
struct SegmentTransform {
  BogoliubovBlock block;
  SymplecticOp two_mode;
  std::vector<std::string> warnings;
};

/// Composes junctions and free evolutions in segment order: a burn is
/// junction, accelerated-chart evolution, inverse junction; a coast is inertial evolution.
SegmentTransform build_segment_symplectic(const Trajectory& trajectory, const CavityGeometry& g,
                                          const ModePair& modes, CoefficientCache& cache,
                                          const PipelineSettings& settings = {});

/// S^N.
SymplecticOp repeat(const SymplecticOp& s, int n);
/// The block composed with itself N times.
BogoliubovBlock repeat(const BogoliubovBlock& b, int n);

/// T_n = 2 n pi / (omega_k + omega_k').
double resonance_time(const ModePair& modes, const CavityGeometry& g, int n);

/// c_kk' = sqrt(k k') (1 - (-1)^{k-k'}) / (pi^2 (k + k')^3), massless.
double mode_coupling(const ModePair& modes);

/// Whether the pair has first-order particle creation, hence a resonance.
bool has_first_order_resonance(const ModePair& modes);

/// ||S^T S - S S^T||_F.
double commutator_defect(const RealMatrix& s);

/// w = 2 (G_k* - G_k') B1 with G = e^{i omega T}.
Complex commutator_w(const ModePair& modes, const CavityGeometry& g, double period, Complex beta1);

struct CommutatorReport {
  double defect = 0.0;
  Complex w{};
  /// First-order prediction of ||[S^T, S]||_F, which is 2|w|.
  double predicted_defect = 0.0;
};

CommutatorReport commutator_report(const SegmentTransform& transform, const ModePair& modes,
                                   const CavityGeometry& g, double period);

/// First-order part of B_kk' of one period, by Richardson extrapolation of the
/// pipeline over burn strengths scaled by {1, 1/2}. Includes the factor h.
Complex first_order_beta(const Trajectory& trajectory, const CavityGeometry& g,
                         const ModePair& modes, CoefficientCache& cache,
                         const PipelineSettings& settings = {});

/// |B1_kk'| = c |1 - g_k* g_k'*| |1 + eps y g_k* g_k'* f_k* f_k'*| h.
double sample_scenario_B1(const SampleScenarioParams& p, const CavityGeometry& g);

/// E = N c |(1 - (-1)^n e^{i(omega_k + omega_k')t}) (1 + (-1)^n eps y)| h.
/// Throws OffResonanceError unless 2(tau + t) = T_n.
double sample_scenario_logneg(const SampleScenarioParams& p, const CavityGeometry& g);

struct GrowthPoint {
  int repetitions = 0;
  double measured = 0.0;   // 1 - nu~_N
  double predicted = 0.0;  // N (1 - nu~_1)
};

std::vector<GrowthPoint> predict_linear_growth(const SymplecticOp& s, int max_repetitions);

/// Everything the CLI reports for one trajectory.
struct TrajectoryEvaluation {
  SegmentTransform transform;
  EntanglementReport report;
  CommutatorReport commutator;
  /// |B_kk'| after all repetitions: the log-negativity in the normalisation E = N |B1|.
  double beta_after_repetitions = 0.0;
  double mean_excitations_k = 0.0;
  double mean_excitations_kp = 0.0;
};

TrajectoryEvaluation evaluate_trajectory(const Trajectory& trajectory, const CavityGeometry& g,
                                         const ModePair& modes, CoefficientCache& cache,
                                         const PipelineSettings& settings = {});

}  // namespace relcav
