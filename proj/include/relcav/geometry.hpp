#pragma once

#include <compare>
#include <string>

#include "relcav/errors.hpp"

namespace relcav {

/// Positive cavity mode label k = 1, 2, ...
class ModeIndex {
 public:
  explicit ModeIndex(int k) : k_(k) {
    if (k < 1) throw DomainError("mode index must be >= 1, got " + std::to_string(k));
  }
  int value() const noexcept { return k_; }
  /// Zero-based row/column in truncated coefficient matrices.
  int offset() const noexcept { return k_ - 1; }
  auto operator<=>(const ModeIndex&) const = default;

 private:
  int k_;
};

/// Two distinct modes (k, k').
class ModePair {
 public:
  ModePair(ModeIndex k, ModeIndex kp) : k_(k), kp_(kp) {
    if (k == kp) {
      throw DomainError("mode pair requires k != k' (got k = k' = " +
                        std::to_string(k.value()) + ")");
    }
  }
  ModePair(int k, int kp) : ModePair(ModeIndex(k), ModeIndex(kp)) {}
  ModeIndex first() const noexcept { return k_; }
  ModeIndex second() const noexcept { return kp_; }
  /// True when k - k' is odd, the only pairs with first-order particle creation.
  bool oddly_separated() const noexcept { return (k_.value() - kp_.value()) % 2 != 0; }

 private:
  ModeIndex k_;
  ModeIndex kp_;
};

/// (time, space) in either chart: (t, x) inertial or (tau, chi) accelerated.
struct SpacetimePoint {
  double time = 0.0;
  double space = 0.0;
};

/// Rigid cavity of proper length L whose centre has proper acceleration a = h/L.
///
/// While accelerating, the walls sit at chi = x_A and chi = x_B with
/// a = 2/(x_A + x_B). Everything precision-sensitive is expressed through
/// (L, h) so that h -> 0 does not lose digits to the large wall coordinates.
class CavityGeometry {
 public:
  static CavityGeometry from_length(double length, double h, double mass = 0.0);
  static CavityGeometry from_walls(double x_a, double x_b, double mass = 0.0);

  double length() const noexcept { return length_; }
  double h() const noexcept { return h_; }
  double mass() const noexcept { return mass_; }
  bool massless() const noexcept { return mass_ == 0.0; }
  /// Centre acceleration a = h/L.
  double acceleration() const noexcept { return h_ / length_; }
  /// Wall positions in the accelerated chart. Require h > 0.
  double x_a() const;
  double x_b() const;
  /// ln(x_B/x_A) = 2 atanh(h/2), computed without cancellation.
  double log_wall_ratio() const;

  /// Same cavity with a different acceleration parameter.
  CavityGeometry with_h(double h) const { return from_length(length_, h, mass_); }

 private:
  CavityGeometry(double length, double h, double mass) : length_(length), h_(h), mass_(mass) {}
  double length_;
  double h_;
  double mass_;
};

}  // namespace relcav
