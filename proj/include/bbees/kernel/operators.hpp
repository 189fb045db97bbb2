#pragma once

#include <vector>

#include "bbees/core/radial_profile.hpp"
#include "bbees/kernel/radial_kernel.hpp"

namespace bbees {

enum class Rounding { upper, lower };

/// Output grid of apply_Gt: uniform spacing on [0, domain_cap] plus the input jumps.
struct GridOptions {
  double spacing = 0.0;     // 0 selects 2e-3 * dirichlet_radius(d)
  double domain_cap = 0.0;  // 0 selects last jump + 12 sqrt(2t), at least the input cap
};

/// Values on a grid, linearly interpolated. May exceed 1 when unclamped.
struct GridFunction {
  std::vector<double> r;
  std::vector<double> value;
  bool clamped = true;

  double operator()(double x) const;
  double max_value() const;
};

struct RoundedProfile {
  RadialProfile profile;
  /// Largest increase of the exact output over one grid cell, including the tail.
  double discretization_error = 0.0;
};

/// Exact mixture r -> sum_j c_j w(a_j, r, t) for the jumps (a_j, c_j) of f.
double mixture_value(const KernelContext& ctx, const RadialProfile& f, double r, double t);

/// G_t f rounded up or down onto a step profile.
RoundedProfile apply_Gt_rounded(const KernelContext& ctx, const RadialProfile& f, double t, Rounding mode,
                                const GridOptions& grid = {});
RadialProfile apply_Gt(const KernelContext& ctx, const RadialProfile& f, double t, Rounding mode = Rounding::upper,
                       const GridOptions& grid = {});

/// min(f, m) pointwise. m <= 0 yields the zero profile.
RadialProfile cutoff(const RadialProfile& f, double m);

/// e^t G_t f0 sampled on the output grid; not clamped to [0, 1].
GridFunction linear_evolve(const KernelContext& ctx, const RadialProfile& f0, double t, const GridOptions& grid = {});

/// Grid used by apply_Gt and linear_evolve.
std::vector<double> output_grid(const KernelContext& ctx, const RadialProfile& f, double t, const GridOptions& grid);

}  // namespace bbees
