#pragma once

#include <complex>
#include <functional>

#include "relcav/geometry.hpp"
#include "relcav/quadrature.hpp"

namespace relcav {

using Complex = std::complex<double>;

/// omega_k = sqrt((k pi / L)^2 + m^2).
double minkowski_frequency(ModeIndex k, const CavityGeometry& g);

/// Inertial-frame mode (1/sqrt(omega_k L)) sin(k pi (x - x_A)/L) e^{-i omega_k t}.
/// The point is given in the accelerated-frame wall coordinates, so h > 0 is required.
Complex minkowski_mode(ModeIndex k, SpacetimePoint p, const CavityGeometry& g);

/// Same mode addressed by depth d = x - x_A in [0, L]; works for any h.
Complex minkowski_mode_at_depth(ModeIndex k, double t, double depth, const CavityGeometry& g);

/// Massless Rindler frequency conjugate to the centre proper time:
/// Omega_k = k pi a / ln(x_B/x_A).
double rindler_frequency(ModeIndex k, const CavityGeometry& g);

/// Massless accelerated-frame mode N_k sin(k pi ln(chi/x_A)/ln(x_B/x_A)) e^{-i Omega_k tau}.
Complex rindler_mode(ModeIndex k, SpacetimePoint p, const CavityGeometry& g);
Complex rindler_mode_at_depth(ModeIndex k, double tau, double depth, const CavityGeometry& g);

/// Klein-Gordon normalisation N_k of the massless Rindler modes, obtained by
/// integrating the norm numerically (memoised per k). Equals 1/sqrt(k pi).
double rindler_normalization(ModeIndex k);

/// Spatial profiles on the t = 0 slice, without normalisation or phase.
double minkowski_profile(ModeIndex k, double depth, const CavityGeometry& g);
double rindler_profile(ModeIndex k, double depth, const CavityGeometry& g);
/// Omega_k / (a x): converts d/dtau into d/dt on the t = 0 slice.
double rindler_slice_rate(ModeIndex k, double depth, const CavityGeometry& g);

/// Cauchy data of a solution on the t = 0 slice, as functions of depth x - x_A.
struct SliceFunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> time_derivative;
};

SliceFunction minkowski_slice(ModeIndex k, const CavityGeometry& g);
SliceFunction rindler_slice(ModeIndex k, const CavityGeometry& g);
SliceFunction conjugate(const SliceFunction& f);

/// (f, g) = -i int_{x_A}^{x_B} (f d_t g* - g* d_t f) dx on the t = 0 slice.
QuadratureResult<Complex> kg_inner_product(const SliceFunction& f, const SliceFunction& g,
                                           const CavityGeometry& geometry,
                                           const QuadratureSpec& spec = {});

}  // namespace relcav
