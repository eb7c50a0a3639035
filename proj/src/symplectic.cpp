#include "relcav/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace relcav {
namespace {

using std::numbers::pi;

constexpr double kPairingTolerance = 1e-8;

void require_square_even(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0) {
    throw DomainError(fmt::format("{}: expected a square matrix of even size, got {}x{}", what,
                                  m.rows(), m.cols()));
  }
}

void require_two_mode(const RealMatrix& m, const char* what) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw DomainError(fmt::format("{}: expected a 4x4 two-mode matrix, got {}x{}", what, m.rows(),
                                  m.cols()));
  }
}

// Complex number z with <M, R(theta)>_F = 2 Re(z e^{-i theta}).
Complex rotation_projection(const Eigen::Matrix2d& m) {
  return {0.5 * (m(0, 0) + m(1, 1)), 0.5 * (m(1, 0) - m(0, 1))};
}

}  // namespace

RealMatrix symplectic_form(int modes) {
  RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

double symplectic_defect(const RealMatrix& s) {
  require_square_even(s, "symplectic_defect");
  const RealMatrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s.transpose() * omega * s - omega).cwiseAbs().maxCoeff();
}

RealMatrix rotation(double theta) {
  RealMatrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

RealMatrix local_rotation(double psi_k, double psi_kp) {
  RealMatrix r = RealMatrix::Zero(4, 4);
  r.topLeftCorner(2, 2) = rotation(psi_k);
  r.bottomRightCorner(2, 2) = rotation(psi_kp);
  return r;
}

RealMatrix two_mode_squeezer(double r) {
  const Eigen::Matrix2d sigma_z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  RealMatrix z(4, 4);
  z.topLeftCorner(2, 2) = std::cosh(r) * Eigen::Matrix2d::Identity();
  z.bottomRightCorner(2, 2) = std::cosh(r) * Eigen::Matrix2d::Identity();
  z.topRightCorner(2, 2) = std::sinh(r) * sigma_z;
  z.bottomLeftCorner(2, 2) = std::sinh(r) * sigma_z;
  return z;
}

RealMatrix raw_symplectic_matrix(const BogoliubovBlock& b, const std::vector<ModeIndex>& modes) {
  const auto m = static_cast<Eigen::Index>(modes.size());
  if (m == 0) throw DomainError("symplectic_from_bogoliubov: empty mode list");
  for (const auto& k : modes) {
    if (k.value() > b.n_max()) {
      throw DomainError(fmt::format("mode {} beyond truncation {}", k.value(), b.n_max()));
    }
  }
  RealMatrix s(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex a = b.alpha(modes[i].offset(), modes[j].offset());
      const Complex bb = b.beta(modes[i].offset(), modes[j].offset());
      const Complex minus = a - bb;
      const Complex plus = a + bb;
      s(2 * i, 2 * j) = minus.real();
      s(2 * i, 2 * j + 1) = plus.imag();
      s(2 * i + 1, 2 * j) = -minus.imag();
      s(2 * i + 1, 2 * j + 1) = plus.real();
    }
  }
  return s;
}

RealMatrix renormalize_symplectic(const RealMatrix& s) {
  require_square_even(s, "renormalize_symplectic");
  const RealMatrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  const RealMatrix id = RealMatrix::Identity(s.rows(), s.cols());
  RealMatrix out = s;
  double defect = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    const RealMatrix e = out.transpose() * omega * out - omega;
    defect = e.cwiseAbs().maxCoeff();
    if (defect < 1e-14) return out;
    out = out * (id + 0.5 * omega * e);
  }
  throw SymplecticityError(
      fmt::format("symplectic renormalisation did not converge (defect {:.3e})", defect), defect);
}

SymplecticOp symplectic_from_bogoliubov(const BogoliubovBlock& b, const std::vector<ModeIndex>& modes,
                                        double max_defect) {
  const RealMatrix raw = raw_symplectic_matrix(b, modes);
  const double defect = symplectic_defect(raw);
  if (defect > max_defect) {
    throw SymplecticityError(
        fmt::format("symplecticity defect {:.3e} exceeds {:.1e}; increase n_max or reduce h", defect,
                    max_defect),
        defect);
  }
  return {renormalize_symplectic(raw), modes, defect};
}

CovarianceMatrix evolve_vacuum(const SymplecticOp& s) {
  return {s.matrix.transpose() * s.matrix, s.modes};
}

RealMatrix matrix_power(const RealMatrix& s, int n) {
  if (n < 1) throw DomainError(fmt::format("repetition count must be >= 1, got {}", n));
  RealMatrix out = s;
  for (int i = 1; i < n; ++i) out = out * s;
  return out;
}

CovarianceMatrix reduce_two_mode(const SymplecticOp& s, int repetitions) {
  require_two_mode(s.matrix, "reduce_two_mode");
  const RealMatrix power = matrix_power(s.matrix, repetitions);
  return {power.transpose() * power, s.modes};
}

CovarianceMatrix exact_marginal(const SymplecticOp& full, int repetitions, const ModePair& pair) {
  const RealMatrix power = matrix_power(full.matrix, repetitions);
  const RealMatrix sigma = power.transpose() * power;
  const auto position = [&](ModeIndex k) -> Eigen::Index {
    const auto it = std::find(full.modes.begin(), full.modes.end(), k);
    if (it == full.modes.end()) {
      throw DomainError(fmt::format("mode {} not present in the transformation", k.value()));
    }
    return 2 * (it - full.modes.begin());
  };
  const Eigen::Index idx[4] = {position(pair.first()), position(pair.first()) + 1,
                               position(pair.second()), position(pair.second()) + 1};
  RealMatrix out(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = sigma(idx[i], idx[j]);
  }
  return {out, {pair.first(), pair.second()}};
}

RealMatrix partial_transpose(const RealMatrix& sigma) {
  require_two_mode(sigma, "partial_transpose");
  const Eigen::Vector4d p(1.0, 1.0, 1.0, -1.0);
  return p.asDiagonal() * sigma * p.asDiagonal();
}

std::vector<double> symplectic_eigenvalues(const RealMatrix& sigma) {
  require_square_even(sigma, "symplectic_eigenvalues");
  const auto modes = static_cast<int>(sigma.rows() / 2);
  const Eigen::MatrixXcd m =
      Complex(0.0, 1.0) * (symplectic_form(modes) * sigma).cast<Complex>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError("eigensolver failed on i Omega sigma", 0.0);
  }
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  std::vector<double> moduli;
  double residue = 0.0;
  for (const Complex& ev : solver.eigenvalues()) {
    residue = std::max(residue, std::abs(ev.imag()));
    moduli.push_back(std::abs(ev.real()));
  }
  if (residue > kPairingTolerance * scale) {
    throw EigenSolverError(
        fmt::format("i Omega sigma has complex eigenvalues (imaginary residue {:.3e})", residue),
        residue);
  }
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> out;
  double mismatch = 0.0;
  for (std::size_t i = 0; i + 1 < moduli.size(); i += 2) {
    mismatch = std::max(mismatch, moduli[i + 1] - moduli[i]);
    out.push_back(0.5 * (moduli[i] + moduli[i + 1]));
  }
  if (mismatch > kPairingTolerance * scale) {
    throw EigenSolverError(fmt::format("unpaired symplectic spectrum (mismatch {:.3e})", mismatch),
                           mismatch);
  }
  return out;
}

std::vector<double> two_mode_symplectic_eigenvalues(const RealMatrix& sigma) {
  require_two_mode(sigma, "two_mode_symplectic_eigenvalues");
  const double det_a = sigma.topLeftCorner(2, 2).determinant();
  const double det_b = sigma.bottomRightCorner(2, 2).determinant();
  const double det_c = sigma.topRightCorner(2, 2).determinant();
  const double seralian = det_a + det_b + 2.0 * det_c;
  const double det = sigma.determinant();
  const double root = std::sqrt(std::max(0.0, seralian * seralian - 4.0 * det));
  // nu_-^2 = 2 det / (seralian + root) avoids cancellation for nearly pure states.
  const double minus_sq = 2.0 * det / (seralian + root);
  const double plus_sq = 0.5 * (seralian + root);
  return {std::sqrt(minus_sq), std::sqrt(plus_sq)};
}

double smallest_pt_eigenvalue(const RealMatrix& sigma) {
  return symplectic_eigenvalues(partial_transpose(sigma)).front();
}

double log_negativity(const RealMatrix& sigma) {
  return std::max(0.0, -std::log(smallest_pt_eigenvalue(sigma)));
}

bool is_bona_fide(const RealMatrix& sigma, double tolerance) {
  require_square_even(sigma, "is_bona_fide");
  const auto modes = static_cast<int>(sigma.rows() / 2);
  const Eigen::MatrixXcd m =
      sigma.cast<Complex>() + Complex(0.0, 1.0) * symplectic_form(modes).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tolerance;
}

double mean_excitations(const CovarianceMatrix& sigma, int index) {
  const auto i = static_cast<Eigen::Index>(2 * index);
  if (index < 0 || i + 1 >= sigma.matrix.rows()) {
    throw DomainError(fmt::format("mode position {} out of range", index));
  }
  return 0.5 * (0.5 * (sigma.matrix(i, i) + sigma.matrix(i + 1, i + 1)) - 1.0);
}

SqueezerFit squeezer_decompose(const RealMatrix& s) {
  require_two_mode(s, "squeezer_decompose");
  const Eigen::Matrix2d sigma_z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  const Complex z11 = rotation_projection(s.topLeftCorner(2, 2));
  const Complex z22 = rotation_projection(s.bottomRightCorner(2, 2));
  const Complex w21 = rotation_projection(sigma_z * s.bottomLeftCorner(2, 2));
  const Complex w12 = rotation_projection(sigma_z * s.topRightCorner(2, 2));

  // Alternate the closed-form angle update with a Newton step in r on
  // F(r) = -2 (cosh r P + sinh r Q) + 4 cosh 2r.
  double r = 0.0;
  double psi_k = 0.0;
  double psi_kp = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double c = std::cosh(r);
    const double sh = std::sinh(r);
    const Complex a = c * z11 + sh * w21;
    const Complex b = c * z22 + sh * w12;
    psi_k = std::abs(a) > 0.0 ? std::arg(a) : 0.0;
    psi_kp = std::abs(b) > 0.0 ? std::arg(b) : 0.0;
    const Complex u1 = std::polar(1.0, -psi_k);
    const Complex u2 = std::polar(1.0, -psi_kp);
    const double p = 2.0 * (u1 * z11 + u2 * z22).real();
    const double q = 2.0 * (u1 * w21 + u2 * w12).real();
    const double grad = -2.0 * (sh * p + c * q) + 8.0 * std::sinh(2.0 * r);
    const double curv = -2.0 * (c * p + sh * q) + 16.0 * std::cosh(2.0 * r);
    const double step = curv > 0.0 ? grad / curv : 0.0;
    r -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(r)) && iter > 0) break;
  }
  // The vacuum only sees S^T S = R^T Z(2r) R, whose off-diagonal block gives
  // sinh(2r) and psi_k + psi_kp; refit those so passive mixing to the right of Z
  // does not leak into the state residual.
  const RealMatrix cov = s.transpose() * s;
  const Complex off = rotation_projection(sigma_z * cov.topRightCorner(2, 2));
  if (std::abs(off) > 0.0) {
    const double magnitude = 0.5 * std::asinh(std::abs(off));
    double phase = std::arg(off);
    if (r < 0.0) phase += pi;
    r = std::copysign(magnitude, r);
    const double delta = 0.5 * std::remainder(phase - psi_k - psi_kp, 2.0 * pi);
    psi_k += delta;
    psi_kp += delta;
  }
  const RealMatrix fitted = two_mode_squeezer(r) * local_rotation(psi_k, psi_kp);
  SqueezerFit fit;
  fit.r = r;
  fit.psi_k = psi_k;
  fit.psi_kp = psi_kp;
  fit.operator_residual = (s - fitted).norm();
  fit.residual = (s.transpose() * s - fitted.transpose() * fitted).norm();
  return fit;
}

EntanglementReport entanglement_report(const SymplecticOp& s, int repetitions) {
  require_two_mode(s.matrix, "entanglement_report");
  const CovarianceMatrix sigma = reduce_two_mode(s, repetitions);
  EntanglementReport report;
  report.nu_tilde = smallest_pt_eigenvalue(sigma.matrix);
  report.nu_tilde_first_order = 1.0 - report.nu_tilde;
  report.log_negativity = std::max(0.0, -std::log(report.nu_tilde));
  const SqueezerFit fit = squeezer_decompose(matrix_power(s.matrix, repetitions));
  report.squeezing_r = fit.r;
  report.psi_k = fit.psi_k;
  report.psi_kp = fit.psi_kp;
  report.squeezer_residual = fit.residual;
  report.mean_excitations_k = mean_excitations(sigma, 0);
  report.mean_excitations_kp = mean_excitations(sigma, 1);
  return report;
}

}  // namespace relcav
