#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bbees/core/radial_profile.hpp"
#include "bbees/core/sandwich_pair.hpp"
#include "bbees/kernel/radial_kernel.hpp"

namespace bbees {

struct GridPolicy {
  double spacing = 0.0;     // node spacing h; 0 selects 2e-3 * dirichlet_radius(d)
  double domain_cap = 0.0;  // 0 selects initial support + 12 sqrt(2 horizon) + two kernel reaches
  int refine = 8;           // output step profiles use spacing h / refine
  int workers = 1;          // threads for building propagator rows
};

/// Initial data given as a continuous nondecreasing function, constant beyond `support`.
struct ContinuousInitial {
  std::function<double(double)> value;
  double support = 0.0;
};

struct SolveRequest {
  KernelContext ctx;
  RadialProfile initial;
  ContinuousInitial continuous;  // used instead of `initial` when value is set
  double horizon = 1.0;
  double step_size = 0.0;   // delta; rounded down so that horizon / delta is an integer
  double target_gap = 0.0;  // used when step_size is 0
  GridPolicy grid;

  bool has_continuous_initial() const { return static_cast<bool>(continuous.value); }
  /// Checks every invariant; throws DomainError or ConfigError.
  void validate() const;
  int steps() const;
  double delta() const;
};

/// Sandwich at the horizon.
SandwichPair solve_sandwich(const SolveRequest& req);

/// Sandwiches at the requested times, each snapped to the nearest multiple of delta.
std::vector<SandwichPair> solve_sandwich_path(const SolveRequest& req, std::span<const double> times);

/// One exact-operator step C_1(e^delta G_delta v), rounded up.
RadialProfile step_plus(const KernelContext& ctx, const RadialProfile& v, double delta, double spacing = 0.0);
/// One exact-operator step e^delta G_delta (C_{e^-delta} v), rounded down.
RadialProfile step_minus(const KernelContext& ctx, const RadialProfile& v, double delta, double spacing = 0.0);

/// (e^{k delta} + 1)(e^delta - 1).
double analytic_gap(int steps, double delta);

struct BoundaryInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double r) const { return lo <= r && r <= hi; }
  /// Distance from r to the interval (0 inside).
  double distance(double r) const;
};

/// inf{r : v(r) >= 1 - tol}, or +infinity if v never gets there.
double free_boundary_radius(const RadialProfile& v, double tol = 1e-6);
/// [radius of upper, radius of lower] at tolerance tol + min(grid_gap, sup (upper - lower)).
BoundaryInterval free_boundary_radius(const SandwichPair& pair, double tol = 1e-6);

}  // namespace bbees
