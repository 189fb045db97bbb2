#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bbees/core/empirical.hpp"
#include "bbees/sim/rng.hpp"

namespace bbees {

struct PairedPaths {
  int dim = 1;
  std::vector<double> times;
  std::vector<double> b;       // b[i*dim + c]: coordinate c at times[i]
  std::vector<double> b_plus;
  bool coupled = false;
  double coupling_time = 0.0;  // meaningful when coupled
};

struct PairOptions {
  int substeps = 32;        // fine steps per sample interval for crossing detection
  int bisections = 48;      // Brownian-bridge halvings around a detected crossing
};

/// Brownian motions B from x and B+ from x_plus (|x| <= |x_plus|) evolving
/// independently until |B| >= |B+| is detected, then B_t = Theta B+_t with the
/// Householder reflection Theta sending B+_T onto the (radially matched) B_T.
/// times must be nonnegative and nondecreasing. Throws DomainError if |x| > |x_plus|.
PairedPaths spherically_ordered_pair(std::span<const double> x, std::span<const double> x_plus,
                                     std::span<const double> times, Rng& rng, const PairOptions& opt = {});

struct SurvivalEstimate {
  double t = 0.0;
  double fraction = 0.0;   // surviving paths ending in A
  double estimate = 0.0;   // e^t fraction
  double std_error = 0.0;  // e^t sqrt(p(1-p)/n)
};

using RadiusFunction = std::function<double(double)>;

/// Monte Carlo of e^t P_x(|B_s| < R_s at every grid time s <= t, B_t in A) for each t
/// in `times` (increasing). Paths are killed at the first grid time with |B_s| >= R_s,
/// which overestimates survival. spacing 0 selects 1e-3 * max(times).
std::vector<SurvivalEstimate> killed_survival_curve(std::span<const double> x, const RadiusFunction& boundary,
                                                    std::span<const double> times, std::size_t n_samples,
                                                    Rng& rng, double spacing = 0.0,
                                                    const PointPredicate& target = {});

SurvivalEstimate killed_survival_density(std::span<const double> x, const RadiusFunction& boundary, double t,
                                         std::size_t n_samples, const PointPredicate& target, Rng& rng,
                                         double spacing = 0.0);

}  // namespace bbees
