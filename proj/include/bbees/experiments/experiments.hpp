#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbees/experiments/report.hpp"
#include "bbees/experiments/samplers.hpp"

namespace bbees {

/// Settings shared by the experiments.
struct ExperimentBase {
  std::size_t N = 2000;
  int dim = 1;
  std::size_t replicas = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  double step_size = 0.01;     // solver delta
  double snapshot_dt = 0.05;   // particle snapshot resolution
  SamplerKind sampler = SamplerKind::uniform_ball;
};

struct HydroConfig {
  ExperimentBase base;
  double t = 1.0;
  double tolerance = 0.05;   // budget for the 90th percentile of the distance
  bool allow_small_N = false;
};

/// Per replica: sup_r distance from F^N(., t) to the sandwich solved from F^N(., 0).
std::vector<ReportRow> hydrodynamic_report(const HydroConfig& cfg);

struct BoundaryConfig {
  ExperimentBase base{5000};
  double T = 2.0;
  double eta = 0.2;
  double tolerance = 0.1;    // budget for the exceedance fraction
};

/// Fraction of replicas with M^N_t > R_t + eta at some snapshot t in [eta, T].
std::vector<ReportRow> boundary_report(const BoundaryConfig& cfg);

struct SelectionConfig {
  ExperimentBase base{2000, 1, 10, 1, 1, 0.01, 0.05, SamplerKind::origin};
  double t = 15.0;
  double K = 1.0;
  double c = 1.0;
  double profile_tolerance = 0.07;   // sup_r |F^N - V|
  double radius_tolerance = 0.15;    // |M^N_t - R_inf|
  double mass_tolerance = 0.05;      // set masses
  double required_fraction = 0.9;
};

/// Distance to the stationary profile at time t after a start in Gamma(K, c).
std::vector<ReportRow> selection_report(const SelectionConfig& cfg);

struct StationarityConfig {
  ExperimentBase base{1000, 1, 2, 1, 1, 0.01, 0.05, SamplerKind::origin};
  double burn_in = 20.0;
  double window = 5.0;
  std::size_t n_windows = 4;
  double tolerance = 0.05;
};

/// Window-averaged F^N along one long trajectory (replica 0); further replicas
/// give the seed-to-seed comparison.
std::vector<ReportRow> stationarity_report(const StationarityConfig& cfg);

}  // namespace bbees
