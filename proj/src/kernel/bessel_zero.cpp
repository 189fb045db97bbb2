#include "bbees/kernel/bessel_zero.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "bbees/core/errors.hpp"

namespace bbees {

double first_bessel_zero(double nu) {
  if (!(nu > -1.0)) throw DomainError("first_bessel_zero: order must exceed -1");
  const double beta = (0.5 * nu + 0.75) * std::numbers::pi;
  const double guess = beta - (4.0 * nu * nu - 1.0) / (8.0 * beta);
  auto J = [nu](double x) { return boost::math::cyl_bessel_j(nu, x); };
  // J_nu > 0 on (0, j_1), so scan up from below the seed to the first sign change.
  double lo = 0.25 * guess;
  const double step = 0.05 * guess;
  double hi = lo + step;
  while (J(hi) > 0.0) {
    lo = hi;
    hi += step;
    if (hi > 4.0 * guess + 10.0) throw EvaluationError("first_bessel_zero: no sign change found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (J(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double dirichlet_radius(int dim) {
  if (dim < 1) throw DomainError("dirichlet_radius: dimension must be >= 1");
  return first_bessel_zero(0.5 * dim - 1.0);
}

}  // namespace bbees
