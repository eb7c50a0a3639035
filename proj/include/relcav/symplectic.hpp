#pragma once

#include <vector>

#include <Eigen/Dense>

#include "relcav/bogoliubov.hpp"

namespace relcav {

using RealMatrix = Eigen::MatrixXd;

/// Real symplectic transformation on quadratures ordered (x_k, p_k) per mode.
struct SymplecticOp {
  RealMatrix matrix;
  std::vector<ModeIndex> modes;
  /// max|S^T Omega S - Omega| of the raw truncated matrix, before renormalisation.
  double truncation_defect = 0.0;
};

/// Gaussian state with zero first moments; the vacuum is the identity.
struct CovarianceMatrix {
  RealMatrix matrix;
  std::vector<ModeIndex> modes;
};

/// Omega = J (+) ... (+) J with J = [[0, 1], [-1, 0]].
RealMatrix symplectic_form(int modes);
double symplectic_defect(const RealMatrix& s);

RealMatrix rotation(double theta);
/// R(psi_k) (+) R(psi_k').
RealMatrix local_rotation(double psi_k, double psi_kp);
/// [[cosh r 1, sinh r sigma_z], [sinh r sigma_z, cosh r 1]].
RealMatrix two_mode_squeezer(double r);

/// 2x2 blocks s_kk' = [[Re(A - B), Im(A + B)], [-Im(A - B), Re(A + B)]] over the
/// listed modes, without any correction.
RealMatrix raw_symplectic_matrix(const BogoliubovBlock& b, const std::vector<ModeIndex>& modes);

/// Nearest symplectic matrix by the iteration S <- S (1 + Omega E / 2), E = S^T Omega S - Omega.
RealMatrix renormalize_symplectic(const RealMatrix& s);

/// Builds the blocks, records the truncation defect and renormalises. Throws
/// SymplecticityError if the raw defect exceeds `max_defect` (too much truncation).
SymplecticOp symplectic_from_bogoliubov(const BogoliubovBlock& b, const std::vector<ModeIndex>& modes,
                                        double max_defect = 1e-6);

/// sigma = S^T S.
CovarianceMatrix evolve_vacuum(const SymplecticOp& s);

/// S^N by repeated multiplication.
RealMatrix matrix_power(const RealMatrix& s, int n);

/// sigma_N = (S^N)^T S^N for the 4x4 two-mode transformation.
CovarianceMatrix reduce_two_mode(const SymplecticOp& s, int repetitions);

/// Rows/columns of (k, k') in the full-space sigma_N = (S^N)^T S^N.
CovarianceMatrix exact_marginal(const SymplecticOp& full, int repetitions, const ModePair& pair);

/// P sigma P with P = diag(1, 1, 1, -1).
RealMatrix partial_transpose(const RealMatrix& sigma);

/// Moduli of the eigenvalue pairs of i Omega sigma, ascending.
std::vector<double> symplectic_eigenvalues(const RealMatrix& sigma);

/// Two-mode closed form from det sigma and the seralian det A + det B + 2 det C.
std::vector<double> two_mode_symplectic_eigenvalues(const RealMatrix& sigma);

/// Smallest symplectic eigenvalue of the partially transposed two-mode state.
double smallest_pt_eigenvalue(const RealMatrix& sigma);

/// max(0, -ln nu~).
double log_negativity(const RealMatrix& sigma);

/// True if sigma + i Omega >= -tolerance.
bool is_bona_fide(const RealMatrix& sigma, double tolerance = 1e-10);

/// <N_k> of the mode at position `index` in the covariance matrix.
double mean_excitations(const CovarianceMatrix& sigma, int index);

struct SqueezerFit {
  double r = 0.0;
  double psi_k = 0.0;
  double psi_kp = 0.0;
  /// ||S^T S - (Z R)^T (Z R)||_F: how well Z(r) R reproduces the state prepared
  /// from the vacuum. Passive operations applied to the vacuum first are invisible here.
  double residual = 0.0;
  /// ||S - Z R||_F, including any passive beam-splitter part of S.
  double operator_residual = 0.0;
};

/// Least-squares fit of a 4x4 S to Z(r) (R(psi_k) (+) R(psi_k')).
SqueezerFit squeezer_decompose(const RealMatrix& s);

struct EntanglementReport {
  double nu_tilde = 1.0;
  double nu_tilde_first_order = 0.0;
  double log_negativity = 0.0;
  double squeezing_r = 0.0;
  double psi_k = 0.0;
  double psi_kp = 0.0;
  double squeezer_residual = 0.0;
  double mean_excitations_k = 0.0;
  double mean_excitations_kp = 0.0;
};

/// Entanglement figures of (S^N) acting on the vacuum, S a 4x4 two-mode op.
EntanglementReport entanglement_report(const SymplecticOp& s, int repetitions);

}  // namespace relcav
