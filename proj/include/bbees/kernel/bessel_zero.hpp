#pragma once

namespace bbees {

/// First positive zero of J_nu for nu > -1, by bisection from a McMahon seed.
double first_bessel_zero(double nu);

/// Radius of the ball whose principal Dirichlet eigenvalue of -Laplacian is 1:
/// the first zero of J_{d/2-1}. Sets the length scale of default grids.
double dirichlet_radius(int dim);

}  // namespace bbees
