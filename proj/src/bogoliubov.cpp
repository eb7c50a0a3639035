#include "relcav/bogoliubov.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace relcav {
namespace {

void require_n_max(int n_max) {
  if (n_max < 1) throw DomainError(fmt::format("n_max must be >= 1, got {}", n_max));
}

struct Tabulation {
  Eigen::MatrixXd alpha;
  Eigen::MatrixXd beta;
};

// Both coefficient matrices on one composite rule. With R_k, M_n the normalised
// profiles and r_k = Omega_k/(a x):
//   alpha_kn = int R_k M_n (omega_n + r_k),  beta_kn = int R_k M_n (omega_n - r_k).
Tabulation tabulate(const CavityGeometry& g, int n_max, int panels) {
  const auto rule = composite_gauss_legendre(0.0, g.length(), panels);
  const auto nodes = static_cast<Eigen::Index>(rule.nodes.size());

  Eigen::MatrixXd rindler(n_max, nodes);    // w_j N_k R_k(d_j)
  Eigen::MatrixXd rate(n_max, nodes);       // w_j N_k R_k(d_j) r_k(d_j)
  Eigen::MatrixXd inertial(n_max, nodes);   // M_n(d_j)
  Eigen::VectorXd omega(n_max);
  for (int k = 1; k <= n_max; ++k) {
    const ModeIndex mode(k);
    const double norm = rindler_normalization(mode);
    omega(k - 1) = minkowski_frequency(mode, g);
    const double amp = 1.0 / std::sqrt(omega(k - 1) * g.length());
    for (Eigen::Index j = 0; j < nodes; ++j) {
      const double d = rule.nodes[j];
      const double r = rule.weights[j] * norm * rindler_profile(mode, d, g);
      rindler(k - 1, j) = r;
      rate(k - 1, j) = r * rindler_slice_rate(mode, d, g);
      inertial(k - 1, j) = amp * minkowski_profile(mode, d, g);
    }
  }
  const Eigen::MatrixXd overlap = rindler * inertial.transpose();
  const Eigen::MatrixXd rate_overlap = rate * inertial.transpose();
  const Eigen::MatrixXd weighted = overlap * omega.asDiagonal();
  return {weighted + rate_overlap, weighted - rate_overlap};
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::oracle: return "oracle";
    case Provenance::perturbative: return "perturbative";
    case Provenance::composed: return "composed";
  }
  return "unknown";
}

BogoliubovBlock identity_block(int n_max) {
  require_n_max(n_max);
  return {ComplexMatrix::Identity(n_max, n_max), ComplexMatrix::Zero(n_max, n_max),
          Provenance::composed};
}

double unitarity_defect(const BogoliubovBlock& b) {
  const int rows = std::max(1, b.n_max() / 2);
  double worst = 0.0;
  for (int k = 0; k < rows; ++k) {
    const double norm = b.alpha.row(k).squaredNorm() - b.beta.row(k).squaredNorm();
    worst = std::max(worst, std::abs(norm - 1.0));
  }
  return worst;
}

BogoliubovBlock junction_coefficients_oracle(const CavityGeometry& g, int n_max,
                                             const OracleSettings& settings) {
  require_n_max(n_max);
  if (!g.massless()) throw UnsupportedError("junction coefficients require a massless field");
  if (!(g.h() > 0.0)) return {identity_block(n_max).alpha, identity_block(n_max).beta,
                              Provenance::oracle};

  const auto& spec = settings.quadrature;
  // Start fine enough to resolve the highest mode before testing convergence.
  int panels = std::max(spec.initial_panels, (n_max + 3) / 4);
  Tabulation previous = tabulate(g, n_max, panels);
  double change = 0.0;
  for (;;) {
    if (panels >= spec.max_panels) {
      throw QuadratureError(
          fmt::format("junction oracle did not converge with {} panels (change {:.3e})", panels,
                      change),
          change);
    }
    panels *= 2;
    Tabulation current = tabulate(g, n_max, panels);
    change = std::max((current.alpha - previous.alpha).cwiseAbs().maxCoeff(),
                      (current.beta - previous.beta).cwiseAbs().maxCoeff());
    previous = std::move(current);
    if (change < spec.abs_tolerance) break;
  }

  BogoliubovBlock block{previous.alpha.cast<Complex>(), previous.beta.cast<Complex>(),
                        Provenance::oracle};
  const double defect = unitarity_defect(block);
  if (defect > settings.unitarity_tolerance) {
    throw UnitarityError(
        fmt::format("junction block at h={} n_max={} has unitarity defect {:.3e} > {:.1e}", g.h(),
                    n_max, defect, settings.unitarity_tolerance),
        defect);
  }
  return block;
}

BogoliubovBlock mirror(const BogoliubovBlock& b) {
  BogoliubovBlock out = b;
  for (int k = 0; k < b.n_max(); ++k) {
    for (int n = 0; n < b.n_max(); ++n) {
      if ((k + n) % 2 != 0) {
        out.alpha(k, n) = -out.alpha(k, n);
        out.beta(k, n) = -out.beta(k, n);
      }
    }
  }
  return out;
}

FirstOrderCoeffs first_order_coefficients(const CavityGeometry& g, int n_max,
                                          const ExtractionSettings& settings) {
  require_n_max(n_max);
  if (!g.massless()) throw UnsupportedError("first-order coefficients require a massless field");
  const double h0 = settings.h0;
  if (!(h0 > 0.0 && h0 < 0.1)) throw DomainError(fmt::format("extraction step h0={} not in (0, 0.1)", h0));

  const auto at = [&](double h) {
    return junction_coefficients_oracle(g.with_h(h), n_max, settings.oracle);
  };
  const BogoliubovBlock full = at(h0);
  const BogoliubovBlock half = at(0.5 * h0);
  const BogoliubovBlock quarter = at(0.25 * h0);
  const ComplexMatrix id = ComplexMatrix::Identity(n_max, n_max);

  // D(h) = X(h)/h has an O(h) error; 2 D(h/2) - D(h) removes it.
  const auto richardson = [](const ComplexMatrix& coarse, const ComplexMatrix& fine, double step) {
    return ComplexMatrix((4.0 * fine - coarse) / step);
  };
  FirstOrderCoeffs out;
  out.n_max = n_max;
  out.h0 = h0;
  out.alpha1 = richardson(full.alpha - id, half.alpha - id, h0);
  out.beta1 = richardson(full.beta, half.beta, h0);
  const ComplexMatrix alpha_check = richardson(half.alpha - id, quarter.alpha - id, 0.5 * h0);
  const ComplexMatrix beta_check = richardson(half.beta, quarter.beta, 0.5 * h0);
  out.spread_alpha = (alpha_check - out.alpha1).cwiseAbs();
  out.spread_beta = (beta_check - out.beta1).cwiseAbs();
  out.diagonal_alpha_residue = out.alpha1.diagonal().head(std::max(1, n_max / 2)).cwiseAbs().maxCoeff();
  // A leftover cubic term shrinks the spread fourfold per halving; a quadratic
  // term that failed to cancel only halves it.
  const BogoliubovBlock eighth = at(0.125 * h0);
  const Eigen::MatrixXd next_alpha =
      (richardson(quarter.alpha - id, eighth.alpha - id, 0.25 * h0) - alpha_check).cwiseAbs();
  const Eigen::MatrixXd next_beta = (richardson(quarter.beta, eighth.beta, 0.25 * h0) - beta_check).cwiseAbs();

  std::string unstable;
  int count = 0;
  double worst = 0.0;
  for (int k = 0; k < n_max; ++k) {
    for (int n = 0; n < n_max; ++n) {
      const double s = std::max(out.spread_alpha(k, n), out.spread_beta(k, n));
      worst = std::max(worst, s);
      const bool alpha_ok = out.spread_alpha(k, n) <= settings.stability_tolerance ||
                            out.spread_alpha(k, n) >= settings.min_shrink * next_alpha(k, n);
      const bool beta_ok = out.spread_beta(k, n) <= settings.stability_tolerance ||
                           out.spread_beta(k, n) >= settings.min_shrink * next_beta(k, n);
      if (alpha_ok && beta_ok) continue;
      if (count++ < 8) {
        unstable += fmt::format(" ({},{}):{:.2e}", k + 1, n + 1, s);
      }
    }
  }
  if (count > 0) {
    throw ExtractionError(
        fmt::format("first-order extraction unstable in {} entries:{}", count, unstable), worst);
  }
  return out;
}

BogoliubovBlock first_order_block(const FirstOrderCoeffs& c, double h) {
  const ComplexMatrix id = ComplexMatrix::Identity(c.n_max, c.n_max);
  return {id + h * c.alpha1, h * c.beta1, Provenance::perturbative};
}

BogoliubovBlock compose(const BogoliubovBlock& first, const BogoliubovBlock& second) {
  if (first.n_max() != second.n_max()) {
    throw DomainError(fmt::format("cannot compose blocks of truncation {} and {}", first.n_max(),
                                  second.n_max()));
  }
  BogoliubovBlock out;
  out.alpha = second.alpha * first.alpha + second.beta * first.beta.conjugate();
  out.beta = second.alpha * first.beta + second.beta * first.alpha.conjugate();
  out.provenance = Provenance::composed;
  return out;
}

BogoliubovBlock invert(const BogoliubovBlock& b, double max_defect) {
  const double defect = unitarity_defect(b);
  if (defect > max_defect) {
    throw UnitarityError(
        fmt::format("block unitarity defect {:.3e} too large to invert (limit {:.1e})", defect,
                    max_defect),
        defect);
  }
  return {b.alpha.adjoint(), -b.beta.transpose(), b.provenance};
}

BogoliubovBlock free_evolution_block(const CavityGeometry& g, double duration, Chart chart,
                                     int n_max) {
  require_n_max(n_max);
  if (!(duration >= 0.0)) throw DomainError(fmt::format("duration must be >= 0, got {}", duration));
  BogoliubovBlock out = identity_block(n_max);
  const bool accelerated = chart == Chart::accelerated && g.h() > 0.0;
  for (int k = 1; k <= n_max; ++k) {
    const ModeIndex mode(k);
    const double frequency =
        accelerated ? rindler_frequency(mode, g) : minkowski_frequency(mode, g);
    out.alpha(k - 1, k - 1) = std::polar(1.0, -frequency * duration);
  }
  return out;
}

double mean_excitations(const BogoliubovBlock& b, ModeIndex k) {
  if (k.value() > b.n_max()) {
    throw DomainError(fmt::format("mode {} beyond truncation {}", k.value(), b.n_max()));
  }
  return b.beta.row(k.offset()).squaredNorm();
}

}  // namespace relcav
