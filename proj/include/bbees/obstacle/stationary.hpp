#pragma once

#include <span>
#include <vector>

#include "bbees/core/radial_profile.hpp"

namespace bbees {

/// Principal Dirichlet eigenfunction U of -Laplacian on the ball of radius
/// R_inf (eigenvalue 1), normalized to a probability density, and its radial
/// mass function V(r) = integral of U over B(r).
class StationaryState {
 public:
  static constexpr int kMaxDim = 12;

  explicit StationaryState(int dim);

  int dim() const noexcept { return dim_; }
  double r_infinity() const noexcept { return r_inf_; }
  /// Amplitude A in U(x) = A |x|^{1-d/2} J_{d/2-1}(|x|).
  double normalizer() const noexcept { return amplitude_; }
  /// Surface area of the unit sphere in R^d.
  double sphere_area() const noexcept { return sphere_; }

  double U_radial(double r) const;
  double U(std::span<const double> x) const;
  double V(double r) const;
  /// dV/dr = |S^{d-1}| r^{d-1} U(r).
  double V_density(double r) const;
  /// Smallest r with V(r) >= p, for p in [0, 1].
  double V_inverse(double p) const;

  /// V as a step profile with jumps at the given spacing, rounded up (upper) or down.
  RadialProfile V_profile(double spacing, bool round_up) const;

  /// |Laplacian U + U| at x from a central-difference stencil of width h.
  double eigen_residual(std::span<const double> x, double h = 1e-3) const;

  /// Integral of U over the ball by quadrature (should be 1).
  double total_mass() const;

 private:
  // r^{-nu} J_nu(r) with nu = d/2 - 1, regular at r = 0.
  double phi(double r) const;
  double radial_integrand(double r) const;
  double cumulative(double r) const;

  int dim_;
  double nu_;
  double r_inf_;
  double sphere_;
  double amplitude_;
  double integral_;  // integral of r^{d-1} phi(r) over [0, R_inf]
  std::vector<double> table_;
};

/// Convenience constructor matching the operation name.
StationaryState stationary_state(int dim);

}  // namespace bbees
