#pragma once

namespace bbees {

/// Dimension and accuracy target for kernel evaluations.
struct KernelContext {
  int dim = 1;
  double tolerance = 1e-10;

  KernelContext() = default;
  KernelContext(int d, double tol = 1e-10);
};

struct KernelValues {
  double w = 0.0;  // P(|B_t| < r | |B_0| = y)
  double g = 0.0;  // d/dr w
  double G = 0.0;  // -d/dy w
};

/// w(y, r, t) for Brownian motion with generator Laplacian (per-coordinate variance 2t).
double radial_cdf(const KernelContext& ctx, double y, double r, double t);
/// g(y, r, t) = d/dr w, the Bessel transition density. y = 0 gives the scaled chi density.
double bessel_density(const KernelContext& ctx, double y, double r, double t);
/// G(y, r, t) = -d/dy w.
double kernel_G(const KernelContext& ctx, double y, double r, double t);

/// All three values at once. Uses closed forms for d = 1 and d = 3.
KernelValues kernel_values(const KernelContext& ctx, double y, double r, double t);

/// Poisson mixture of incomplete gamma functions:
/// |B_t|^2 / (2t) is noncentral chi-squared with d degrees of freedom and
/// noncentrality y^2 / (2t). Valid for every dimension.
KernelValues kernel_series(const KernelContext& ctx, double y, double r, double t);

/// Erf-based formulas for d = 1 and d = 3.
KernelValues kernel_closed_form(int dim, double y, double r, double t);

/// -d/dy w by central differences with Richardson extrapolation.
double kernel_G_richardson(const KernelContext& ctx, double y, double r, double t);

}  // namespace bbees
