#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bbees/core/errors.hpp"
#include "bbees/kernel/operators.hpp"
#include "bbees/obstacle/solver.hpp"
#include "bbees/obstacle/stationary.hpp"

using namespace bbees;

namespace {

RadialProfile random_monotone(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> loc(n), val(n);
  for (auto& v : loc) v = 0.05 + 2.5 * u(gen);
  for (auto& v : val) v = u(gen);
  std::sort(loc.begin(), loc.end());
  std::sort(val.begin(), val.end());
  val.back() = u(gen) < 0.5 ? 1.0 : val.back();
  std::vector<RadialProfile::Jump> j;
  for (int i = 0; i < n; ++i) j.push_back({loc[i], val[i]});
  return RadialProfile::from_nodes(j, 4.0);
}

}  // namespace

TEST_CASE("analytic gap arithmetic") {
  CHECK(analytic_gap(100, 0.01) == doctest::Approx((std::exp(1.0) + 1.0) * (std::exp(0.01) - 1.0)));
  CHECK(std::abs(analytic_gap(100, 0.01) - 0.037365) < 5e-6);
}

TEST_CASE("request rounding and validation") {
  SolveRequest req;
  req.ctx = KernelContext(1);
  req.initial = RadialProfile::step(1.0);
  req.horizon = 1.0;
  req.step_size = 0.03;
  CHECK(req.steps() == 34);
  CHECK(req.delta() == doctest::Approx(1.0 / 34));
  CHECK(req.delta() <= 0.03);
  req.step_size = 0.01;
  CHECK(req.steps() == 100);
  req.step_size = 0.0;
  req.target_gap = 0.05;
  const double d = 0.05 / (2.0 * (std::exp(1.0) + 1.0) * std::numbers::e);
  CHECK(req.steps() == static_cast<int>(std::ceil(1.0 / d)));
  CHECK(analytic_gap(req.steps(), req.delta()) <= 0.05);
  req.initial = RadialProfile({{0.0, 0.5}}, 1.0);
  CHECK_THROWS_AS(req.validate(), DomainError);
  req.initial = RadialProfile::zero();
  req.horizon = 0.0;
  CHECK_THROWS_AS(req.validate(), DomainError);
}

TEST_CASE("zero initial stays zero") {
  SolveRequest req;
  req.ctx = KernelContext(2);
  req.initial = RadialProfile::zero();
  req.horizon = 0.2;
  req.step_size = 0.01;
  const auto p = solve_sandwich(req);
  CHECK(p.upper.terminal_value() == 0.0);
  CHECK(p.lower.terminal_value() == 0.0);
  CHECK(p.steps_taken == 20);
}

TEST_CASE("first step matches the exact operators") {
  // One step from the unit step at a: upper = min(1, e^delta w(a, ., delta)).
  const KernelContext ctx(1);
  const double delta = std::log(2.0);
  SolveRequest req;
  req.ctx = ctx;
  req.initial = RadialProfile::step(0.5, 1.0, 2.0);
  req.horizon = delta;
  req.step_size = delta;
  const auto p = solve_sandwich(req);
  const auto sp = step_plus(ctx, req.initial, delta);
  const auto sm = step_minus(ctx, req.initial, delta);
  for (double r = 0.0; r < 8.0; r += 0.01) {
    const double up = std::min(1.0, 2.0 * radial_cdf(ctx, 0.5, r, delta));
    const double lo = 2.0 * 0.5 * radial_cdf(ctx, 0.5, r, delta);
    CHECK(p.upper(r) >= up - 1e-9);
    CHECK(p.lower(r) <= lo + 1e-9);
    CHECK(p.upper(r) <= up + p.grid_gap + 1e-9);
    CHECK(p.lower(r) >= lo - p.grid_gap - 1e-9);
    CHECK(sp(r) >= up - 1e-12);
    CHECK(sm(r) <= lo + 1e-12);
    CHECK(sm(r) <= sp(r));
  }
}

TEST_CASE("engine agrees with the standalone operators over several steps") {
  const KernelContext ctx(2);
  const double delta = 0.02;
  const RadialProfile v0({{0.3, 0.2}, {0.8, 0.5}, {1.4, 0.9}}, 3.0);
  SolveRequest req;
  req.ctx = ctx;
  req.initial = v0;
  req.horizon = 0.08;
  req.step_size = delta;
  const auto p = solve_sandwich(req);
  RadialProfile a = v0, b = v0;
  for (int k = 0; k < 4; ++k) {
    a = step_plus(ctx, a, delta);
    b = step_minus(ctx, b, delta);
  }
  CHECK(sup_distance(a, p.upper) < 0.02);
  CHECK(sup_distance(b, p.lower) < 0.02);
}

TEST_CASE("ordering and gap certificate on random profiles") {
  std::mt19937_64 gen(8);
  for (int d : {1, 2, 3}) {
    for (int k = 0; k < 3; ++k) {
      SolveRequest req;
      req.ctx = KernelContext(d);
      req.initial = random_monotone(gen, 2 + 3 * k);
      req.horizon = 0.5;
      req.step_size = 0.01;
      const auto p = solve_sandwich(req);
      for (const auto& h : p.history) {
        CHECK(h.min_gap >= 0.0);
        CHECK(h.sup_gap <= h.analytic_gap + h.grid_gap);
      }
      CHECK(ordering_violation(p.lower, p.upper) == 0.0);
      CHECK(p.measured_gap() <= p.analytic_gap + p.grid_gap);
      CHECK(p.grid_gap < p.analytic_gap);
    }
  }
}

TEST_CASE("V is a fixed point up to the certified gap") {
  for (int d : {1, 2, 3}) {
    const StationaryState s(d);
    SolveRequest req;
    req.ctx = KernelContext(d);
    req.continuous = {[&s](double r) { return s.V(r); }, s.r_infinity()};
    req.horizon = 1.0;
    req.step_size = 0.01;
    const double times[] = {0.5, 1.0};
    const auto path = solve_sandwich_path(req, times);
    for (const auto& p : path) {
      CHECK(containment_violation(p.lower, p.upper, [&s](double r) { return s.V(r); }, 1.0) == 0.0);
      const auto bi = free_boundary_radius(p);
      CHECK(bi.lo <= s.r_infinity());
      CHECK(bi.distance(s.r_infinity()) < 0.1);
    }
  }
}

TEST_CASE("free boundary of single profiles") {
  const StationaryState s(1);
  const auto v = s.V_profile(1e-3, true);
  CHECK(std::abs(free_boundary_radius(v) - std::numbers::pi / 2) < 2e-3);
  CHECK(std::isinf(free_boundary_radius(RadialProfile({{0.1, 0.5}}, 2.0))));
  BoundaryInterval bi{1.0, 2.0};
  CHECK(bi.distance(0.5) == 0.5);
  CHECK(bi.distance(1.5) == 0.0);
}
