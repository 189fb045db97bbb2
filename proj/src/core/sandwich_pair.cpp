#include "bbees/core/sandwich_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bbees {

RadialProfile SandwichPair::mid() const {
  std::vector<RadialProfile::Jump> nodes;
  for (double x : merged_breakpoints({&lower, &upper})) {
    // Value on the cell starting at x.
    const double x1 = std::nextafter(x, std::numeric_limits<double>::infinity());
    const auto after = [x1](const RadialProfile& f) { return f(x1); };
    nodes.push_back({x, 0.5 * (after(lower) + after(upper))});
  }
  return RadialProfile::from_nodes(nodes, std::max(lower.domain_cap(), upper.domain_cap()));
}

double SandwichPair::measured_gap() const {
  double s = upper.terminal_value() - lower.terminal_value();
  for (double x : merged_breakpoints({&lower, &upper})) s = std::max(s, upper(x) - lower(x));
  return std::max(0.0, s);
}

}  // namespace bbees
