#include "relcav/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace relcav {

CompositeRule composite_gauss_legendre(double lo, double hi, int panels) {
  using Rule = boost::math::quadrature::gauss<double, kGaussOrder>;
  // Boost stores the non-negative half of a symmetric rule.
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();

  CompositeRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * kGaussOrder);
  rule.weights.reserve(rule.nodes.capacity());
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double centre = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) {
        rule.nodes.push_back(centre);
        rule.weights.push_back(half * weight[i]);
        continue;
      }
      rule.nodes.push_back(centre - half * abscissa[i]);
      rule.weights.push_back(half * weight[i]);
      rule.nodes.push_back(centre + half * abscissa[i]);
      rule.weights.push_back(half * weight[i]);
    }
  }
  return rule;
}

}  // namespace relcav
