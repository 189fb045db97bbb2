#include "bbees/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbees/core/empirical.hpp"
#include "bbees/core/errors.hpp"
#include "bbees/core/parallel.hpp"
#include "bbees/core/stats.hpp"
#include "bbees/obstacle/stationary.hpp"
#include "bbees/sim/nbbm.hpp"

namespace bbees {

namespace {

constexpr double kInfo = std::numeric_limits<double>::infinity();

void check_base(const ExperimentBase& b) {
  if (b.N < 1) throw ConfigError("N must be >= 1");
  if (b.dim < 1 || b.dim > 12) throw ConfigError("d must lie in 1..12");
  if (b.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (b.workers < 1) throw ConfigError("workers must be >= 1");
  if (!(b.step_size > 0.0)) throw ConfigError("step_size must be positive");
  if (!(b.snapshot_dt > 0.0)) throw ConfigError("snapshot_dt must be positive");
}

SimParams sim_params(const ExperimentBase& b) {
  SimParams p;
  p.dim = b.dim;
  p.population = b.N;
  p.seed = b.seed;
  return p;
}

InitialSampler sampler_of(const ExperimentBase& b) { return {b.sampler, b.dim}; }

struct RowMaker {
  std::string experiment;
  const ExperimentBase& base;
  double t;

  ReportRow operator()(const std::string& statistic, double value, double tolerance,
                       Comparison cmp = Comparison::at_most) const {
    return {experiment, base.N, base.dim, t, statistic, value, tolerance, cmp, base.replicas, base.seed};
  }
};

// t0, t0 + dt, ... up to and including t1.
std::vector<double> time_grid(double t0, double t1, double dt) {
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(t0 + static_cast<double>(k) * dt);
  if (t1 - g.back() > 1e-9 * std::max(1.0, t1)) g.push_back(t1);
  return g;
}

// Moves jumps at r = 0 (particles at the origin) to a tiny positive radius.
RadialProfile lift_origin(const RadialProfile& f) {
  if (!f.has_jump_at_origin()) return f;
  std::vector<RadialProfile::Jump> j(f.jumps().begin(), f.jumps().end());
  const double eps = j.size() > 1 ? std::min(1e-9, 0.5 * j[1].location) : 1e-9;
  j.front().location = eps;
  return RadialProfile(std::move(j), f.domain_cap());
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double fraction_at_most(const std::vector<double>& v, double tol) {
  const auto k = std::count_if(v.begin(), v.end(), [tol](double x) { return x <= tol; });
  return static_cast<double>(k) / static_cast<double>(v.size());
}

}  // namespace

std::vector<ReportRow> hydrodynamic_report(const HydroConfig& cfg) {
  const auto& b = cfg.base;
  check_base(b);
  if (!(cfg.t > 0.0)) throw ConfigError("t must be positive");
  if (b.N < 100 && !cfg.allow_small_N) throw ConfigError("N must be >= 100 for the hydrodynamic report");
  const auto sampler = sampler_of(b);
  const auto params = sim_params(b);
  std::vector<double> dist(b.replicas), measured(b.replicas), grid(b.replicas);
  double analytic = 0.0;
  parallel_for(b.replicas, b.workers, [&](std::size_t i) {
    auto rng = make_stream(b.seed, i);
    const auto x0 = sampler.sample(b.N, rng);
    const auto run = advance_nbbm(params, x0, cfg.t, rng);
    SolveRequest req;
    req.ctx = KernelContext(b.dim);
    req.initial = lift_origin(empirical_cdf(x0));
    req.horizon = cfg.t;
    req.step_size = b.step_size;
    const auto pair = solve_sandwich(req);
    dist[i] = bracket_distance(empirical_cdf(run.state), pair.lower, pair.upper);
    measured[i] = pair.measured_gap();
    grid[i] = pair.grid_gap;
    if (i == 0) analytic = pair.analytic_gap;
  });
  const RowMaker row{"hydro", b, cfg.t};
  return {
      row("sup_distance_q90", nearest_rank(dist, 0.9), cfg.tolerance),
      row("sup_distance_median", nearest_rank(dist, 0.5), kInfo),
      row("sup_distance_max", max_of(dist), kInfo),
      row("bracket_width_max", max_of(measured), kInfo),
      row("analytic_gap", analytic, kInfo),
      row("grid_gap_max", max_of(grid), kInfo),
  };
}

std::vector<ReportRow> boundary_report(const BoundaryConfig& cfg) {
  const auto& b = cfg.base;
  check_base(b);
  if (!(cfg.eta > 0.0 && cfg.eta < cfg.T)) throw ConfigError("need 0 < eta < T");
  const auto sampler = sampler_of(b);
  const auto times = time_grid(cfg.eta, cfg.T, b.snapshot_dt);

  SolveRequest req;
  req.ctx = KernelContext(b.dim);
  sampler.set_initial(req);
  req.horizon = cfg.T;
  req.step_size = b.step_size;
  req.grid.workers = b.workers;
  const auto path = solve_sandwich_path(req, times);
  std::vector<double> R(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) R[j] = free_boundary_radius(path[j]).hi;

  auto params = sim_params(b);
  params.record_times = times;
  std::vector<double> excess(b.replicas);
  parallel_for(b.replicas, b.workers, [&](std::size_t i) {
    auto rng = make_stream(b.seed, i);
    const auto run = advance_nbbm(params, sampler.sample(b.N, rng), cfg.T, rng);
    double e = -kInfo;
    for (std::size_t j = 0; j < run.snapshots.size(); ++j) e = std::max(e, max_radius(run.snapshots[j].ensemble) - R[j]);
    excess[i] = e;
  });
  std::vector<double> exceed(b.replicas);
  for (std::size_t i = 0; i < b.replicas; ++i) exceed[i] = excess[i] > cfg.eta ? 1.0 : 0.0;
  const RowMaker row{"boundary", b, cfg.T};
  return {
      row("exceedance_fraction", mean(exceed), cfg.tolerance),
      row("max_excess_over_R", max_of(excess), kInfo),
      row("eta", cfg.eta, kInfo),
      row("R_at_T", R.back(), kInfo),
  };
}

std::vector<ReportRow> selection_report(const SelectionConfig& cfg) {
  const auto& b = cfg.base;
  check_base(b);
  if (!(cfg.t > 0.0)) throw ConfigError("t must be positive");
  if (!(cfg.K > 0.0) || !(cfg.c > 0.0 && cfg.c <= 1.0)) throw ConfigError("need K > 0 and c in (0, 1]");
  const auto sampler = sampler_of(b);
  const StationaryState s(b.dim);
  const double Rinf = s.r_infinity();
  auto params = sim_params(b);
  params.record_times = time_grid(cfg.t, cfg.t + 1.0, b.snapshot_dt);
  const double eps = cfg.profile_tolerance;
  const double r_eps = s.V_inverse(1.0 - eps);

  std::vector<double> dev(b.replicas), rdev(b.replicas), over(b.replicas), ball(b.replicas), half(b.replicas);
  std::vector<double> inconsistent(b.replicas);
  parallel_for(b.replicas, b.workers, [&](std::size_t i) {
    auto rng = make_stream(b.seed, i);
    const auto x0 = sampler.sample(b.N, rng);
    if (!in_gamma(x0, cfg.K, cfg.c)) throw ConfigError("initial configuration is not in Gamma(K, c)");
    const auto run = advance_nbbm(params, x0, cfg.t + 1.0, rng);
    const auto& now = run.snapshots.front().ensemble;
    dev[i] = sup_distance(empirical_cdf(now), [&s](double r) { return s.V(r); }, 1.0);
    const double M = max_radius(now);
    rdev[i] = std::abs(M - Rinf);
    double w = -kInfo;
    for (const auto& snap : run.snapshots) w = std::max(w, max_radius(snap.ensemble) - Rinf);
    over[i] = w;
    ball[i] = measure_of_set(now, [Rinf](std::span<const double> x) { return euclidean_norm(x) < Rinf; });
    half[i] = measure_of_set(now, [](std::span<const double> x) { return x[0] > 0.0; });
    inconsistent[i] = dev[i] <= eps && M < r_eps ? 1.0 : 0.0;
  });
  const RowMaker row{"selection", b, cfg.t};
  double bad = 0.0;
  for (double x : inconsistent) bad += x;
  return {
      row("fraction_profile_within", fraction_at_most(dev, cfg.profile_tolerance), cfg.required_fraction,
          Comparison::at_least),
      row("fraction_radius_within", fraction_at_most(rdev, cfg.radius_tolerance), cfg.required_fraction,
          Comparison::at_least),
      row("ball_mass_deviation", std::abs(mean(ball) - 1.0), cfg.mass_tolerance),
      row("halfspace_mass_deviation", std::abs(mean(half) - 0.5), cfg.mass_tolerance),
      row("consistency_violations", bad, 0.0),
      row("profile_deviation_median", nearest_rank(dev, 0.5), kInfo),
      row("profile_deviation_max", max_of(dev), kInfo),
      row("radius_deviation_median", nearest_rank(rdev, 0.5), kInfo),
      row("window_overshoot_q90", nearest_rank(over, 0.9), kInfo),
      row("halfspace_mass_mean", mean(half), kInfo),
  };
}

std::vector<ReportRow> stationarity_report(const StationarityConfig& cfg) {
  const auto& b = cfg.base;
  check_base(b);
  if (!(cfg.burn_in > 0.0) || !(cfg.window > 0.0)) throw ConfigError("burn_in and window must be positive");
  if (cfg.n_windows < 1) throw ConfigError("n_windows must be >= 1");
  const auto sampler = sampler_of(b);
  const StationaryState s(b.dim);
  const double end = cfg.burn_in + cfg.window * static_cast<double>(cfg.n_windows);
  auto params = sim_params(b);
  const auto per_window = static_cast<std::size_t>(std::llround(cfg.window / b.snapshot_dt));
  if (per_window < 1) throw ConfigError("window must cover at least one snapshot");
  for (std::size_t k = 0; k < per_window * cfg.n_windows; ++k) {
    params.record_times.push_back(cfg.burn_in + (static_cast<double>(k) + 0.5) * cfg.window / per_window);
  }

  // averages[replica][window]
  std::vector<std::vector<RadialProfile>> averages(b.replicas);
  parallel_for(b.replicas, b.workers, [&](std::size_t i) {
    auto rng = make_stream(b.seed, i);
    const auto run = advance_nbbm(params, sampler.sample(b.N, rng), end, rng);
    for (std::size_t w = 0; w < cfg.n_windows; ++w) {
      std::vector<double> norms;
      for (std::size_t k = w * per_window; k < (w + 1) * per_window; ++k) {
        const auto n = run.snapshots[k].ensemble.norms();
        norms.insert(norms.end(), n.begin(), n.end());
      }
      averages[i].push_back(empirical_cdf_of_norms(norms));
    }
  });
  const RowMaker row{"stationarity", b, end};
  const auto V = [&s](double r) { return s.V(r); };
  const auto& a0 = averages.front();
  double pairwise = 0.0;
  for (std::size_t u = 0; u < a0.size(); ++u) {
    for (std::size_t v = u + 1; v < a0.size(); ++v) pairwise = std::max(pairwise, sup_distance(a0[u], a0[v]));
  }
  std::vector<ReportRow> rows{row("window_pairwise_max", pairwise, cfg.tolerance)};
  if (b.replicas > 1) {
    double seeds = 0.0;
    for (std::size_t i = 1; i < b.replicas; ++i) {
      for (std::size_t w = 0; w < cfg.n_windows; ++w) seeds = std::max(seeds, sup_distance(a0[w], averages[i][w]));
    }
    rows.push_back(row("seed_window_max", seeds, cfg.tolerance));
  }
  for (std::size_t w = 0; w < a0.size(); ++w) {
    rows.push_back(row("window_" + std::to_string(w + 1) + "_distance_to_V", sup_distance(a0[w], V, 1.0), kInfo));
  }
  return rows;
}

}  // namespace bbees
