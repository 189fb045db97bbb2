#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "bbees/cli/config.hpp"
#include "bbees/cli/run.hpp"
#include "bbees/core/radial_profile.hpp"
#include "bbees/core/stats.hpp"
#include "bbees/experiments/report.hpp"
#include "bbees/kernel/radial_kernel.hpp"
#include "bbees/obstacle/solver.hpp"
#include "bbees/obstacle/stationary.hpp"
#include "bbees/sim/bbm.hpp"
#include "bbees/sim/brownian.hpp"
#include "bbees/sim/rng.hpp"

using namespace bbees;
namespace fs = std::filesystem;

namespace {

// Tolerances, sample sizes and runtime budgets.
constexpr double kKernelSe = 4.0;
constexpr std::size_t kKernelSamples = 1'000'000;
constexpr double kErfTol = 1e-8;
constexpr int kProfiles = 50;
constexpr double kDelta = 0.01;
constexpr double kMassTol = 1e-10;
constexpr double kEigenTol = 1e-6;
constexpr double kBesselTol = 1e-9;
constexpr double kR2 = 2.404825557695773;
constexpr int kCoupledRuns = 20;
constexpr std::size_t kPairs = 10'000;
constexpr double kKsLevel = 1e-3;
constexpr double kSlopeTol = 0.1;
constexpr std::size_t kSurvivalPaths = 200'000;
constexpr double kSurvivalSpacing = 5e-4;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
fs::path out_root;

void report(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || secs <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  char timing[96];
  if (budget_s > 0.0) {
    std::snprintf(timing, sizeof timing, "%.1fs <= %.0fs%s", secs, budget_s, in_time ? "" : " EXCEEDED");
  } else {
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
  }
  std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << timing << ")"
            << std::endl;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome kernel_monte_carlo() {
  double worst = 0.0;
  std::mt19937_64 gen(20240101);
  std::normal_distribution<double> nd;
  std::vector<double> s(kKernelSamples);
  for (int d : {1, 2, 3}) {
    const KernelContext ctx(d);
    for (double y : {0.0, 0.5, 2.0}) {
      for (double t : {0.1, 1.0, 4.0}) {
        const double sd = std::sqrt(2.0 * t);
        for (auto& v : s) {
          double q = 0.0;
          for (int c = 0; c < d; ++c) {
            const double x = (c == 0 ? y : 0.0) + sd * nd(gen);
            q += x * x;
          }
          v = std::sqrt(q);
        }
        std::sort(s.begin(), s.end());
        const double n = static_cast<double>(s.size());
        for (int k = 1; k <= 20; ++k) {
          const double r = s[static_cast<std::size_t>(k * (s.size() - 1) / 21)];
          const double emp = static_cast<double>(std::lower_bound(s.begin(), s.end(), r) - s.begin()) / n;
          const double w = radial_cdf(ctx, y, r, t);
          worst = std::max(worst, std::abs(w - emp) / std::sqrt(w * (1.0 - w) / n));
        }
      }
    }
  }
  const double erf_err = std::abs(radial_cdf(KernelContext(1), 0.0, 2.0, 1.0) - std::erf(1.0));
  return {worst <= kKernelSe && erf_err <= kErfTol,
          fmt("max |w - MC|/se = %.3f (<= 4) over 27 configs x 20 quantiles; |w(0,2,1) - erf 1| = %.2e", worst,
              erf_err)};
}

RadialProfile random_monotone(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 1 + static_cast<int>(u(gen) * 12);
  std::vector<double> loc(n), val(n);
  for (auto& v : loc) v = 0.05 + 3.0 * u(gen);
  for (auto& v : val) v = u(gen);
  std::sort(loc.begin(), loc.end());
  std::sort(val.begin(), val.end());
  if (u(gen) < 0.5) val.back() = 1.0;
  std::vector<RadialProfile::Jump> j;
  for (int i = 0; i < n; ++i) j.push_back({loc[i], val[i]});
  return RadialProfile::from_nodes(j, 0.0);
}

Outcome sandwich_certificate() {
  std::mt19937_64 gen(77);
  int broken = 0;
  double worst_margin = -1.0, worst_order = 0.0, max_gap = 0.0, analytic = 0.0;
  for (int i = 0; i < kProfiles; ++i) {
    SolveRequest req;
    req.ctx = KernelContext(1 + i % 3);
    req.initial = random_monotone(gen);
    req.horizon = 1.0;
    req.step_size = kDelta;
    const auto p = solve_sandwich(req);
    bool ok = ordering_violation(p.lower, p.upper) == 0.0 && p.measured_gap() <= p.total_gap();
    for (const auto& h : p.history) {
      ok = ok && h.min_gap >= 0.0 && h.sup_gap <= h.analytic_gap + h.grid_gap;
      worst_order = std::min(worst_order, h.min_gap);
      worst_margin = std::max(worst_margin, h.sup_gap - (h.analytic_gap + h.grid_gap));
    }
    max_gap = std::max(max_gap, p.measured_gap());
    analytic = p.analytic_gap;
    broken += ok ? 0 : 1;
  }
  return {broken == 0, fmt("%.0f/50 profiles broken; min(upper-lower) = %.2e; max sup gap %.5f", broken,
                           worst_order, max_gap) +
                           fmt(" vs analytic %.6f + grid; worst slack %.2e", analytic, worst_margin)};
}

Outcome stationary_fixed_point() {
  const double expected[] = {std::numbers::pi / 2, kR2, std::numbers::pi};
  const double times[] = {0.5, 1.0, 2.0};
  double worst_contain = 0.0, worst_mass = 0.0, worst_eigen = 0.0, worst_r = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const StationaryState s(d);
    worst_mass = std::max(worst_mass, std::abs(s.total_mass() - 1.0));
    worst_r = std::max(worst_r, std::abs(s.r_infinity() - expected[d - 1]));
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    for (int k = 1; k < 10; ++k) {
      x[0] = s.r_infinity() * k / 10.0;
      worst_eigen = std::max(worst_eigen, s.eigen_residual(x));
    }
    SolveRequest req;
    req.ctx = KernelContext(d);
    req.continuous = {[&s](double r) { return s.V(r); }, s.r_infinity()};
    req.horizon = 2.0;
    req.step_size = kDelta;
    for (const auto& p : solve_sandwich_path(req, times)) {
      worst_contain =
          std::max(worst_contain, containment_violation(p.lower, p.upper, [&s](double r) { return s.V(r); }, 1.0));
    }
  }
  const bool ok = worst_contain == 0.0 && worst_mass <= kMassTol && worst_eigen <= kEigenTol && worst_r <= kBesselTol;
  return {ok, fmt("containment violation %.2e; |mass - 1| %.2e; eigen residual %.2e", worst_contain, worst_mass,
                  worst_eigen) +
                  fmt("; |R_inf - expected| %.2e", worst_r)};
}

Outcome pathwise_domination() {
  std::size_t records = 0, violations = 0, mismatches = 0;
  double worst = 0.0;
  for (int d : {1, 2}) {
    SimParams p;
    p.dim = d;
    p.population = 200;
    for (int k = 1; k <= 40; ++k) p.record_times.push_back(0.05 * k);
    for (int r = 0; r < kCoupledRuns; ++r) {
      auto rng = make_stream(4000 + static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(r));
      const auto run = coupled_run(p, ParticleEnsemble::at_origin(d, 200), 2.0, rng);
      for (const auto& rec : run.records) {
        ++records;
        violations += rec.holds ? 0 : 1;
        worst = std::max(worst, rec.violation);
      }
      mismatches += run.blue_count_errors + run.contains_mismatches;
    }
  }
  return {violations == 0 && mismatches == 0 && records > 0,
          fmt("%.0f violations in %.0f observations (20 runs per d in {1,2}); sup excess %.2e", violations, records,
              worst) +
              fmt("; bookkeeping mismatches %.0f", mismatches)};
}

Outcome ordered_pairs() {
  const double x[] = {0.2, 0.0}, y[] = {0.6, 0.3};
  std::vector<double> times;
  for (int k = 1; k <= 10; ++k) times.push_back(0.1 * k);
  std::size_t violations = 0, coupled = 0;
  std::vector<std::vector<double>> marg(4);
  for (std::size_t r = 0; r < kPairs; ++r) {
    auto rng = make_stream(5005, r);
    const auto pp = spherically_ordered_pair(x, y, times, rng);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (std::hypot(pp.b[2 * i], pp.b[2 * i + 1]) > std::hypot(pp.b_plus[2 * i], pp.b_plus[2 * i + 1])) ++violations;
    }
    coupled += pp.coupled ? 1 : 0;
    const std::size_t last = 2 * (times.size() - 1);
    marg[0].push_back(pp.b[last] - x[0]);
    marg[1].push_back(pp.b[last + 1] - x[1]);
    marg[2].push_back(pp.b_plus[last] - y[0]);
    marg[3].push_back(pp.b_plus[last + 1] - y[1]);
  }
  const boost::math::normal g(0.0, std::sqrt(2.0 * times.back()));
  double min_p = 1.0;
  for (const auto& m : marg) {
    min_p = std::min(min_p, ks_p_value(ks_statistic(m, [&g](double v) { return boost::math::cdf(g, v); }), m.size()));
  }
  return {violations == 0 && min_p > kKsLevel,
          fmt("%.0f ordering violations over 10^4 pairs x 10 times; %.0f pairs coupled; min KS p = %.4f (> 0.001)",
              violations, coupled, min_p)};
}

cli::RunResult run_cli(const std::string& command, cli::RunConfig cfg, const std::string& tag) {
  cfg.run.out = (out_root / tag).string();
  std::ostringstream log;
  return cli::run(command, cfg, log);
}

std::string row_text(const fs::path& root, std::initializer_list<const char*> stats) {
  std::ifstream f(root / "report.csv");
  std::string line, out;
  std::getline(f, line);
  while (std::getline(f, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    for (const char* s : stats) {
      if (cols.size() > 6 && cols[4] == s) out += (out.empty() ? "" : "; ") + cols[4] + " " + cols[5];
    }
  }
  return out;
}

std::string hydro_hash;

Outcome hydro() {
  cli::RunConfig c;
  const auto r = run_cli("hydro", c, "hydro_w1");
  hydro_hash = r.manifest_sha256;
  return {r.exit_code == 0, row_text(r.root, {"sup_distance_q90", "sup_distance_max"}) + " (q90 <= 0.05)"};
}

Outcome boundary() {
  cli::RunConfig c;
  const auto r = run_cli("boundary", c, "boundary");
  return {r.exit_code == 0, row_text(r.root, {"exceedance_fraction", "max_excess_over_R"}) + " (fraction <= 0.1)"};
}

Outcome selection() {
  cli::RunConfig c;
  const auto r = run_cli("selection", c, "selection");
  return {r.exit_code == 0,
          row_text(r.root, {"fraction_profile_within", "fraction_radius_within", "halfspace_mass_deviation"}) +
              " (fractions >= 0.9, deviation <= 0.05)"};
}

Outcome killed_decay() {
  const StationaryState s(1);
  const double R = s.r_infinity();
  std::vector<double> times;
  for (int k = 0; k <= 16; ++k) times.push_back(2.0 + 0.25 * k);
  const double x[] = {0.0};
  auto rng = make_stream(9, 0);
  const auto curve = killed_survival_curve(x, [R](double) { return R; }, times, kSurvivalPaths, rng, kSurvivalSpacing);
  std::vector<double> ts, ls;
  for (const auto& e : curve) {
    if (e.fraction <= 0.0) return {false, "no surviving paths at t = " + fmt("%.2f", e.t)};
    ts.push_back(e.t);
    ls.push_back(std::log(e.fraction));
  }
  const double slope = ols_slope(ts, ls);
  return {std::abs(slope + 1.0) <= kSlopeTol,
          fmt("slope of log survival on [2,6] = %.4f (target -1 +- 0.1); survivors at t=6: %.0f", slope,
              curve.back().fraction * kSurvivalPaths)};
}

Outcome determinism() {
  cli::RunConfig c;
  c.run.workers = 3;
  const auto again = run_cli("hydro", c, "hydro_w3");
  cli::RunConfig sim;
  sim.simulate.N = 500;
  sim.simulate.t = 2.0;
  sim.simulate.d = 2;
  const auto s1 = run_cli("simulate", sim, "simulate_a");
  sim.run.workers = 4;
  const auto s2 = run_cli("simulate", sim, "simulate_b");
  cli::RunConfig sol;
  const auto v1 = run_cli("solve", sol, "solve_a");
  sol.run.workers = 2;
  const auto v2 = run_cli("solve", sol, "solve_b");
  const bool ok = !hydro_hash.empty() && again.manifest_sha256 == hydro_hash && s1.manifest_sha256 == s2.manifest_sha256 &&
                  v1.manifest_sha256 == v2.manifest_sha256;
  return {ok, "manifest hashes hydro " + hydro_hash.substr(0, 12) + (again.manifest_sha256 == hydro_hash ? " == " : " != ") +
                  again.manifest_sha256.substr(0, 12) + " (workers 1 vs 3); simulate " +
                  (s1.manifest_sha256 == s2.manifest_sha256 ? "equal" : "differ") + "; solve " +
                  (v1.manifest_sha256 == v2.manifest_sha256 ? "equal" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  out_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "bbees-acceptance";
  fs::remove_all(out_root);
  report(1, "kernel correctness", 60, kernel_monte_carlo);
  report(2, "sandwich certificate", 120, sandwich_certificate);
  report(3, "stationary fixed point", 0, stationary_fixed_point);
  report(4, "pathwise domination", 60, pathwise_domination);
  report(5, "spherically ordered coupling", 0, ordered_pairs);
  report(6, "hydrodynamic desk check", 180, hydro);
  report(7, "boundary desk check", 300, boundary);
  report(8, "selection desk check", 600, selection);
  report(9, "killed BM spectral decay", 120, killed_decay);
  report(10, "determinism", 0, determinism);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
