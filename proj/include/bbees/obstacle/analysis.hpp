#pragma once

#include <span>
#include <vector>

#include "bbees/core/radial_profile.hpp"
#include "bbees/obstacle/solver.hpp"

namespace bbees {

/// Comparison of two solves against the L^inf contraction bound e^t |v0 - w0|.
struct ContractionReport {
  double initial_distance = 0.0;  // sup |v0 - w0|
  double lhs = 0.0;               // sup |mid(v) - mid(w)| at time t
  double rhs = 0.0;               // e^t initial_distance + both total gaps
  double gaps = 0.0;
  bool holds = false;
};

/// Solves from v0 and w0 with the time, step and grid of `base`.
ContractionReport check_contraction(const SolveRequest& base, const RadialProfile& v0, const RadialProfile& w0);

struct ConvergenceRow {
  double t = 0.0;
  double sup_deviation = 0.0;  // sup_r |mid - V|
  BoundaryInterval boundary;
  double boundary_distance = 0.0;  // distance from R_inf to the boundary interval
  double total_gap = 0.0;
};

/// Tracks the solve started from req's initial data against V at each scheduled time.
/// Requires v0(K) >= c; throws ConfigError otherwise.
std::vector<ConvergenceRow> converge_to_V(const SolveRequest& req, std::span<const double> schedule, double K,
                                          double c);

struct MassMovementRow {
  double t = 0.0;
  double lower_at = 0.0;  // lower branch at K - 1
  double upper_at = 0.0;
};

struct MassMovementReport {
  std::vector<MassMovementRow> rows;
  bool doubled = false;
  double t1 = 0.0;  // first scanned time with lower(K - 1) >= 2c
};

/// Starts from c 1{r > K} and scans t_grid for the first time the lower branch
/// carries mass 2c inside radius K - 1. `base` supplies ctx, step and grid.
MassMovementReport mass_movement_check(const SolveRequest& base, double c, double K, std::span<const double> t_grid);

}  // namespace bbees
