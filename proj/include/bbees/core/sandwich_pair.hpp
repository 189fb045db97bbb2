#pragma once

#include <vector>

#include "bbees/core/radial_profile.hpp"

namespace bbees {

/// Diagnostics of one sandwich step.
struct StepRecord {
  int step = 0;
  double sup_gap = 0.0;        // sup (upper - lower) on the solver grid
  double min_gap = 0.0;        // min (upper - lower); negative means the ordering broke
  double analytic_gap = 0.0;   // (e^{k delta} + 1)(e^delta - 1)
  double grid_gap = 0.0;       // accumulated discretization allowance
};

/// Lower and upper bracketing profiles of the obstacle solution at one time.
struct SandwichPair {
  RadialProfile lower;
  RadialProfile upper;
  double analytic_gap = 0.0;
  double grid_gap = 0.0;
  int steps_taken = 0;
  double step_size = 0.0;
  std::vector<StepRecord> history;

  /// Pointwise midpoint (lower + upper) / 2.
  RadialProfile mid() const;
  /// sup_r (upper - lower).
  double measured_gap() const;
  double total_gap() const { return analytic_gap + grid_gap; }
  /// The grid allowance dominates the time-stepping gap: the grid is too coarse for this delta.
  bool grid_limited() const { return grid_gap > analytic_gap; }
};

}  // namespace bbees
