#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "relcav/field_modes.hpp"

namespace relcav {

using ComplexMatrix = Eigen::MatrixXcd;

enum class Provenance { oracle = 0, perturbative = 1, composed = 2 };
std::string_view to_string(Provenance p);

/// Truncated Bogoliubov transformation phi_out_k = sum_n (alpha_kn phi_in_n + beta_kn phi_in_n*).
/// Row and column n - 1 hold mode n.
struct BogoliubovBlock {
  ComplexMatrix alpha;
  ComplexMatrix beta;
  Provenance provenance = Provenance::composed;

  int n_max() const { return static_cast<int>(alpha.rows()); }
};

BogoliubovBlock identity_block(int n_max);

/// max_{k <= n_max/2} |sum_n (|alpha_kn|^2 - |beta_kn|^2) - 1|. Rows near the
/// truncation edge are excluded since they couple strongly to dropped modes.
double unitarity_defect(const BogoliubovBlock& b);

struct OracleSettings {
  QuadratureSpec quadrature{};
  /// Oracle blocks whose unitarity defect exceeds this are rejected.
  double unitarity_tolerance = 1e-6;
};

/// Inertial -> uniformly accelerated junction from Klein-Gordon products on t = 0:
/// alpha_kn = (phi^R_k, phi^M_n), beta_kn = -(phi^R_k, phi^M_n*).
/// Throws UnitarityError if the truncated block is not unitary to tolerance.
BogoliubovBlock junction_coefficients_oracle(const CavityGeometry& g, int n_max,
                                             const OracleSettings& settings = {});

/// Junction for acceleration towards -x: the oracle block conjugated by the
/// cavity reflection, entries picking up (-1)^{k+n}.
BogoliubovBlock mirror(const BogoliubovBlock& b);

/// First-order coefficients per unit h: alpha = I + h alpha1 + O(h^2), beta = h beta1 + O(h^2).
struct FirstOrderCoeffs {
  ComplexMatrix alpha1;
  ComplexMatrix beta1;
  int n_max = 0;
  double h0 = 0.0;
  /// |difference| between the (h0, h0/2) and (h0/2, h0/4) extrapolants, per entry.
  Eigen::MatrixXd spread_alpha;
  Eigen::MatrixXd spread_beta;
  /// max_k |alpha1_kk| over k <= n_max/2; zero for the massless field.
  double diagonal_alpha_residue = 0.0;
};

struct ExtractionSettings {
  double h0 = 1e-3;
  /// An entry is unstable when its extrapolants differ by more than this and the
  /// difference shrinks by less than min_shrink when the step is halved again
  /// (4 for a cancelled quadratic term, 2 for a surviving one).
  double stability_tolerance = 1e-6;
  double min_shrink = 3.0;
  OracleSettings oracle{};
};

/// Richardson-extrapolated finite difference of the oracle over {h0, h0/2};
/// O(h^2) contamination cancels to O(h0^2). The length of g is used, its h ignored.
FirstOrderCoeffs first_order_coefficients(const CavityGeometry& g, int n_max,
                                          const ExtractionSettings& settings = {});

/// Perturbative block I + h alpha1, h beta1.
BogoliubovBlock first_order_block(const FirstOrderCoeffs& c, double h);

/// Transformation applying `first` then `second`.
BogoliubovBlock compose(const BogoliubovBlock& first, const BogoliubovBlock& second);

/// alpha' = alpha^dagger, beta' = -beta^T. Throws UnitarityError if the block is
/// too far from unitary (defect above `max_defect`) for this to be an inverse.
BogoliubovBlock invert(const BogoliubovBlock& b, double max_defect = 1e-3);

enum class Chart { inertial, accelerated };

/// Phase rotation alpha = diag(e^{-i theta_k}), theta_k = omega_k t (inertial)
/// or Omega_k tau (accelerated, massless only).
BogoliubovBlock free_evolution_block(const CavityGeometry& g, double duration, Chart chart,
                                     int n_max);

/// <N_k> = sum_n |beta_kn|^2 for vacuum input.
double mean_excitations(const BogoliubovBlock& b, ModeIndex k);

}  // namespace relcav
