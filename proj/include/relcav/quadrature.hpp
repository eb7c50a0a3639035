#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <fmt/format.h>

#include "relcav/errors.hpp"

namespace relcav {

/// Composite Gauss-Legendre rule with panel doubling.
struct QuadratureSpec {
  int initial_panels = 4;
  int max_panels = 8192;
  /// Stop once successive estimates differ by less than this (absolute).
  double abs_tolerance = 1e-12;
};

template <typename T>
struct QuadratureResult {
  T value{};
  double error_estimate = 0.0;
  int panels = 0;
};

/// Nodes and weights of a composite rule on [lo, hi].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Points per panel.
inline constexpr int kGaussOrder = 20;

CompositeRule composite_gauss_legendre(double lo, double hi, int panels);

template <typename F>
auto apply_rule(const CompositeRule& rule, F&& f) {
  using R = decltype(f(0.0));
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

/// Integrate f over [lo, hi], doubling panels until two successive estimates agree.
template <typename F>
auto integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {})
    -> QuadratureResult<decltype(f(0.0))> {
  using R = decltype(f(0.0));
  int panels = spec.initial_panels;
  R previous = apply_rule(composite_gauss_legendre(lo, hi, panels), f);
  double change = 0.0;
  while (panels < spec.max_panels) {
    panels *= 2;
    R current = apply_rule(composite_gauss_legendre(lo, hi, panels), f);
    change = std::abs(current - previous);
    if (change < spec.abs_tolerance) return {current, change, panels};
    previous = current;
  }
  throw QuadratureError(
      fmt::format("quadrature did not converge with {} panels (last change {:.3e}, tolerance {:.1e})",
                  panels, change, spec.abs_tolerance),
      change);
}

}  // namespace relcav
