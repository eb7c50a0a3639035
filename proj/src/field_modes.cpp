#include "relcav/field_modes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

namespace relcav {
namespace {

using std::numbers::pi;

void require_massless(const CavityGeometry& g, const char* what) {
  if (!g.massless()) {
    throw UnsupportedError(fmt::format("{}: massive Rindler modes are not supported (m = {})", what,
                                       g.mass()));
  }
}

void require_accelerated(const CavityGeometry& g, const char* what) {
  if (!(g.h() > 0.0)) throw DomainError(fmt::format("{}: requires h > 0", what));
}

// Depth of an absolute wall-chart coordinate, rejecting points outside the cavity.
double depth_of(double position, const CavityGeometry& g) {
  const double depth = position - g.x_a();
  const double slack = 1e-12 * std::max(1.0, std::abs(g.x_b()));
  if (depth < -slack || depth > g.length() + slack) {
    throw DomainError(fmt::format("point {} lies outside the cavity [{}, {}]", position, g.x_a(),
                                  g.x_b()));
  }
  return std::clamp(depth, 0.0, g.length());
}

}  // namespace

double minkowski_frequency(ModeIndex k, const CavityGeometry& g) {
  const double q = k.value() * pi / g.length();
  return std::sqrt(q * q + g.mass() * g.mass());
}

double minkowski_profile(ModeIndex k, double depth, const CavityGeometry& g) {
  return std::sin(k.value() * pi * depth / g.length());
}

Complex minkowski_mode_at_depth(ModeIndex k, double t, double depth, const CavityGeometry& g) {
  if (depth < 0.0 || depth > g.length()) {
    throw DomainError(fmt::format("depth {} outside [0, {}]", depth, g.length()));
  }
  const double omega = minkowski_frequency(k, g);
  return minkowski_profile(k, depth, g) / std::sqrt(omega * g.length()) *
         std::polar(1.0, -omega * t);
}

Complex minkowski_mode(ModeIndex k, SpacetimePoint p, const CavityGeometry& g) {
  return minkowski_mode_at_depth(k, p.time, depth_of(p.space, g), g);
}

double rindler_frequency(ModeIndex k, const CavityGeometry& g) {
  require_massless(g, "rindler_frequency");
  require_accelerated(g, "rindler_frequency");
  // k pi a / ln(x_B/x_A) with a = h/L.
  return k.value() * pi * g.h() / (g.length() * g.log_wall_ratio());
}

double rindler_profile(ModeIndex k, double depth, const CavityGeometry& g) {
  const double h = g.h();
  // ln(chi/x_A) / ln(x_B/x_A) with chi = x_A + depth.
  const double s = std::log1p(h * (depth / g.length()) / (1.0 - 0.5 * h)) / g.log_wall_ratio();
  return std::sin(k.value() * pi * s);
}

double rindler_slice_rate(ModeIndex k, double depth, const CavityGeometry& g) {
  const double h = g.h();
  return rindler_frequency(k, g) / (1.0 - 0.5 * h + h * depth / g.length());
}

double rindler_normalization(ModeIndex k) {
  static std::mutex mutex;
  static std::map<int, double> memo;
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(k.value()); it != memo.end()) return it->second;
  }
  // In the log coordinate s = ln(chi/x_A)/ln(x_B/x_A) the Klein-Gordon norm of the
  // unnormalised mode is int_0^1 2 k pi sin^2(k pi s) ds, independent of the geometry.
  const double kpi = k.value() * pi;
  const auto norm = integrate(
      [kpi](double s) {
        const double v = std::sin(kpi * s);
        return 2.0 * kpi * v * v;
      },
      0.0, 1.0, QuadratureSpec{.initial_panels = 2, .abs_tolerance = 1e-14 * kpi});
  const double n = 1.0 / std::sqrt(norm.value);
  std::lock_guard lock(mutex);
  memo.emplace(k.value(), n);
  return n;
}

Complex rindler_mode_at_depth(ModeIndex k, double tau, double depth, const CavityGeometry& g) {
  require_massless(g, "rindler_mode");
  require_accelerated(g, "rindler_mode");
  if (depth < 0.0 || depth > g.length()) {
    throw DomainError(fmt::format("depth {} outside [0, {}]", depth, g.length()));
  }
  return rindler_normalization(k) * rindler_profile(k, depth, g) *
         std::polar(1.0, -rindler_frequency(k, g) * tau);
}

Complex rindler_mode(ModeIndex k, SpacetimePoint p, const CavityGeometry& g) {
  require_massless(g, "rindler_mode");
  require_accelerated(g, "rindler_mode");
  return rindler_mode_at_depth(k, p.time, depth_of(p.space, g), g);
}

SliceFunction minkowski_slice(ModeIndex k, const CavityGeometry& g) {
  const double omega = minkowski_frequency(k, g);
  const double amp = 1.0 / std::sqrt(omega * g.length());
  return {
      [=](double d) { return Complex(amp * minkowski_profile(k, d, g), 0.0); },
      [=](double d) { return Complex(0.0, -omega * amp * minkowski_profile(k, d, g)); },
  };
}

SliceFunction rindler_slice(ModeIndex k, const CavityGeometry& g) {
  require_massless(g, "rindler_slice");
  require_accelerated(g, "rindler_slice");
  const double amp = rindler_normalization(k);
  return {
      [=](double d) { return Complex(amp * rindler_profile(k, d, g), 0.0); },
      [=](double d) {
        return Complex(0.0, -rindler_slice_rate(k, d, g) * amp * rindler_profile(k, d, g));
      },
  };
}

SliceFunction conjugate(const SliceFunction& f) {
  return {
      [v = f.value](double d) { return std::conj(v(d)); },
      [dt = f.time_derivative](double d) { return std::conj(dt(d)); },
  };
}

QuadratureResult<Complex> kg_inner_product(const SliceFunction& f, const SliceFunction& g,
                                           const CavityGeometry& geometry,
                                           const QuadratureSpec& spec) {
  const auto integrand = [&](double d) {
    const Complex gc = std::conj(g.value(d));
    const Complex dgc = std::conj(g.time_derivative(d));
    return Complex(0.0, -1.0) * (f.value(d) * dgc - gc * f.time_derivative(d));
  };
  return integrate(integrand, 0.0, geometry.length(), spec);
}

}  // namespace relcav
