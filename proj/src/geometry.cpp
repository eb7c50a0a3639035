#include "relcav/geometry.hpp"

#include <cmath>

#include <fmt/format.h>

namespace relcav {

CavityGeometry CavityGeometry::from_length(double length, double h, double mass) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw DomainError(fmt::format("cavity length must be positive and finite, got {}", length));
  }
  if (!(h >= 0.0) || !(h < 2.0)) {
    throw DomainError(fmt::format("acceleration parameter h must satisfy 0 <= h < 2, got {}", h));
  }
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw DomainError(fmt::format("mass must be >= 0, got {}", mass));
  }
  return CavityGeometry(length, h, mass);
}

CavityGeometry CavityGeometry::from_walls(double x_a, double x_b, double mass) {
  if (!(x_a > 0.0) || !(x_b > x_a) || !std::isfinite(x_b)) {
    throw DomainError(fmt::format("walls must satisfy 0 < x_A < x_B, got x_A={} x_B={}", x_a, x_b));
  }
  const double length = x_b - x_a;
  const double a = 2.0 / (x_a + x_b);
  return from_length(length, a * length, mass);
}

double CavityGeometry::x_a() const {
  if (h_ == 0.0) throw DomainError("wall positions are undefined for an inertial cavity (h = 0)");
  return length_ / h_ - 0.5 * length_;
}

double CavityGeometry::x_b() const {
  if (h_ == 0.0) throw DomainError("wall positions are undefined for an inertial cavity (h = 0)");
  return length_ / h_ + 0.5 * length_;
}

double CavityGeometry::log_wall_ratio() const { return 2.0 * std::atanh(0.5 * h_); }

}  // namespace relcav
