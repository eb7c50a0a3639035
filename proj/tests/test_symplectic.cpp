#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "relcav/symplectic.hpp"

using namespace relcav;
using std::numbers::pi;

namespace {

const std::vector<ModeIndex> kPair{ModeIndex(1), ModeIndex(2)};

double max_abs(const RealMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Single-mode squeezer diag(e^{-r}, e^{r}) on one of two modes.
RealMatrix local_squeezer(double r1, double r2) {
  RealMatrix s = RealMatrix::Zero(4, 4);
  s.diagonal() << std::exp(-r1), std::exp(r1), std::exp(-r2), std::exp(r2);
  return s;
}

// 50:50-type beam splitter with mixing angle theta.
RealMatrix beam_splitter(double theta) {
  RealMatrix b = RealMatrix::Zero(4, 4);
  const double c = std::cos(theta), s = std::sin(theta);
  b.topLeftCorner(2, 2) = c * Eigen::Matrix2d::Identity();
  b.bottomRightCorner(2, 2) = c * Eigen::Matrix2d::Identity();
  b.topRightCorner(2, 2) = s * Eigen::Matrix2d::Identity();
  b.bottomLeftCorner(2, 2) = -s * Eigen::Matrix2d::Identity();
  return b;
}

RealMatrix random_symplectic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return local_rotation(3 * u(rng), 3 * u(rng)) * local_squeezer(u(rng), u(rng)) *
         beam_splitter(3 * u(rng)) * two_mode_squeezer(u(rng)) * local_rotation(3 * u(rng), 3 * u(rng));
}

BogoliubovBlock building_block(double h, double tau, int n_max) {
  const auto g = CavityGeometry::from_length(1.0, h);
  const auto v = junction_coefficients_oracle(g, n_max);
  return compose(compose(v, free_evolution_block(g, tau, Chart::accelerated, n_max)), invert(v));
}

}  // namespace

TEST_SUITE("symplectic-core") {

TEST_CASE("symplectic matrices from Bogoliubov blocks") {
  const auto id = symplectic_from_bogoliubov(identity_block(3), kPair);
  CHECK(max_abs(id.matrix - RealMatrix::Identity(4, 4)) == 0.0);

  auto phase = identity_block(3);
  phase.alpha(0, 0) = std::polar(1.0, -0.4);
  const auto rot = symplectic_from_bogoliubov(phase, {ModeIndex(1)});
  CHECK(max_abs(rot.matrix - rotation(0.4)) < 1e-15);

  const auto oracle = junction_coefficients_oracle(CavityGeometry::from_length(1.0, 1e-3), 40);
  const RealMatrix raw = raw_symplectic_matrix(oracle, kPair);
  CHECK(symplectic_defect(raw) < 1e-5);
  const auto op = symplectic_from_bogoliubov(oracle, kPair);
  CHECK(op.truncation_defect == doctest::Approx(symplectic_defect(raw)));
  CHECK(symplectic_defect(op.matrix) < 1e-10);
  CHECK(max_abs(op.matrix - raw) < 1e-5);

  CHECK_THROWS_AS(symplectic_from_bogoliubov(oracle, kPair, 1e-14), SymplecticityError);
  CHECK_THROWS_AS(symplectic_from_bogoliubov(oracle, {ModeIndex(41)}), DomainError);
}

TEST_CASE("vacuum evolution") {
  const SymplecticOp id{RealMatrix::Identity(4, 4), kPair, 0.0};
  CHECK(max_abs(evolve_vacuum(id).matrix - RealMatrix::Identity(4, 4)) == 0.0);
  const SymplecticOp rot{local_rotation(0.3, -1.1), kPair, 0.0};
  CHECK(max_abs(evolve_vacuum(rot).matrix - RealMatrix::Identity(4, 4)) < 1e-15);
  const SymplecticOp z{two_mode_squeezer(0.2), kPair, 0.0};
  const auto sigma = evolve_vacuum(z).matrix;
  CHECK(sigma(0, 0) == doctest::Approx(std::cosh(0.4)));
  CHECK(sigma(0, 2) == doctest::Approx(std::sinh(0.4)));
  CHECK(sigma(1, 3) == doctest::Approx(-std::sinh(0.4)));
  const auto nu = symplectic_eigenvalues(sigma);
  CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nu[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-mode reduction") {
  const SymplecticOp id{RealMatrix::Identity(4, 4), kPair, 0.0};
  CHECK(max_abs(reduce_two_mode(id, 1).matrix - RealMatrix::Identity(4, 4)) == 0.0);

  const auto block = building_block(1e-3, 0.4, 40);
  const auto sub = symplectic_from_bogoliubov(block, kPair);
  CHECK(max_abs(matrix_power(sub.matrix, 2) - sub.matrix * sub.matrix) == 0.0);

  std::vector<ModeIndex> all;
  for (int k = 1; k <= 40; ++k) all.emplace_back(k);
  const SymplecticOp full{raw_symplectic_matrix(block, all), all, 0.0};
  for (int n : {1, 3}) {
    const auto a = reduce_two_mode(sub, n).matrix;
    const auto b = exact_marginal(full, n, ModePair(1, 2)).matrix;
    CHECK(max_abs(a - b) < 1e-6);
  }
  CHECK_THROWS_AS(reduce_two_mode(sub, 0), DomainError);
}

TEST_CASE("partial transpose") {
  const RealMatrix id = RealMatrix::Identity(4, 4);
  CHECK(max_abs(partial_transpose(id) - id) == 0.0);
  const RealMatrix sigma = two_mode_squeezer(0.3).transpose() * two_mode_squeezer(0.3);
  const RealMatrix pt = partial_transpose(sigma);
  CHECK(max_abs(partial_transpose(pt) - sigma) == 0.0);
  CHECK(pt(0, 2) == sigma(0, 2));
  CHECK(pt(1, 3) == -sigma(1, 3));
  CHECK(pt(3, 1) == -sigma(3, 1));
}

TEST_CASE("symplectic eigenvalues") {
  const auto vac = symplectic_eigenvalues(RealMatrix::Identity(4, 4));
  CHECK(vac.size() == 2);
  CHECK(vac[0] == doctest::Approx(1.0));
  CHECK(vac[1] == doctest::Approx(1.0));

  for (double r : {0.01, 0.2, 0.7}) {
    const RealMatrix sigma = two_mode_squeezer(r).transpose() * two_mode_squeezer(r);
    CHECK(smallest_pt_eigenvalue(sigma) == doctest::Approx(std::exp(-2 * r)).epsilon(1e-12));
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> thermal(1.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const RealMatrix s = random_symplectic(rng);
    Eigen::Vector4d d;
    const double n1 = thermal(rng), n2 = thermal(rng);
    d << n1, n1, n2, n2;
    const RealMatrix sigma = s.transpose() * d.asDiagonal() * s;
    const auto general = symplectic_eigenvalues(sigma);
    const auto closed = two_mode_symplectic_eigenvalues(sigma);
    REQUIRE(general[0] == doctest::Approx(std::min(n1, n2)).epsilon(1e-9));
    REQUIRE(general[1] == doctest::Approx(std::max(n1, n2)).epsilon(1e-9));
    REQUIRE(closed[0] == doctest::Approx(general[0]).epsilon(1e-9));
    REQUIRE(closed[1] == doctest::Approx(general[1]).epsilon(1e-9));
    const auto scaled = symplectic_eigenvalues(2.5 * sigma);
    REQUIRE(scaled[0] == doctest::Approx(2.5 * general[0]).epsilon(1e-9));
    REQUIRE(is_bona_fide(sigma));
    const auto pt = partial_transpose(sigma);
    REQUIRE(two_mode_symplectic_eigenvalues(pt)[0] ==
            doctest::Approx(symplectic_eigenvalues(pt)[0]).epsilon(1e-8));
  }
}

TEST_CASE("logarithmic negativity") {
  CHECK(log_negativity(RealMatrix::Identity(4, 4)) < 1e-14);
  const RealMatrix sq = local_squeezer(0.4, -0.9);
  CHECK(log_negativity(sq.transpose() * sq) == doctest::Approx(0.0).epsilon(1e-12));
  const RealMatrix z = two_mode_squeezer(0.01);
  CHECK(log_negativity(z.transpose() * z) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(log_negativity(two_mode_squeezer(0.0)) < 1e-14);

  // Strictly decreasing in nu~ as nu~ sweeps (0, 1).
  double previous_nu = 1.0, previous_e = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double r = 0.02 * i;
    const RealMatrix s = two_mode_squeezer(r);
    const RealMatrix sigma = s.transpose() * s;
    const double nu = smallest_pt_eigenvalue(sigma);
    const double e = log_negativity(sigma);
    REQUIRE(nu < previous_nu);
    REQUIRE(e > previous_e);
    previous_nu = nu;
    previous_e = e;
  }
}

TEST_CASE("bona fide condition") {
  CHECK(is_bona_fide(RealMatrix::Identity(4, 4)));
  CHECK_FALSE(is_bona_fide(0.5 * RealMatrix::Identity(4, 4)));
}

TEST_CASE("mean excitations from the covariance") {
  const RealMatrix s = two_mode_squeezer(0.3);
  const CovarianceMatrix sigma{s.transpose() * s, kPair};
  CHECK(mean_excitations(sigma, 0) == doctest::Approx(std::pow(std::sinh(0.3), 2)));
  CHECK(mean_excitations(sigma, 1) == doctest::Approx(std::pow(std::sinh(0.3), 2)));
}

TEST_CASE("two-mode squeezer decomposition") {
  const auto id = squeezer_decompose(RealMatrix::Identity(4, 4));
  CHECK(id.r == doctest::Approx(0.0));
  CHECK(id.psi_k == doctest::Approx(0.0));
  CHECK(id.psi_kp == doctest::Approx(0.0));
  CHECK(id.residual == doctest::Approx(0.0));

  const auto fit = squeezer_decompose(two_mode_squeezer(0.001) * local_rotation(0.3, 0.7));
  CHECK(std::abs(fit.r - 0.001) < 1e-10);
  CHECK(std::abs(fit.psi_k - 0.3) < 1e-10);
  CHECK(std::abs(fit.psi_kp - 0.7) < 1e-10);
  CHECK(fit.residual < 1e-12);
  CHECK(fit.operator_residual < 1e-12);

  const auto big = squeezer_decompose(two_mode_squeezer(-0.8) * local_rotation(-2.0, 1.2));
  CHECK(big.r == doctest::Approx(-0.8).epsilon(1e-10));
  CHECK(big.psi_k == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(big.psi_kp == doctest::Approx(1.2).epsilon(1e-10));
}

TEST_CASE("entanglement report of a pure squeezer") {
  const SymplecticOp z{two_mode_squeezer(0.01), kPair, 0.0};
  const auto report = entanglement_report(z, 3);
  CHECK(report.nu_tilde == doctest::Approx(std::exp(-0.06)).epsilon(1e-12));
  CHECK(report.log_negativity == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(report.squeezing_r == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(report.nu_tilde_first_order == doctest::Approx(1.0 - std::exp(-0.06)));
}

}
