#include <doctest.h>

#include <cmath>

#include "bbees/core/errors.hpp"
#include "bbees/kernel/operators.hpp"
#include "bbees/obstacle/analysis.hpp"
#include "bbees/obstacle/stationary.hpp"

using namespace bbees;

namespace {

SolveRequest base(int d, double horizon) {
  SolveRequest r;
  r.ctx = KernelContext(d);
  r.horizon = horizon;
  r.step_size = 0.01;
  return r;
}

}  // namespace

TEST_CASE("contraction bound for identical and scaled initial data") {
  const RadialProfile v0({{0.2, 0.3}, {0.7, 0.8}, {1.2, 1.0}}, 3.0);
  const auto same = check_contraction(base(1, 0.5), v0, v0);
  CHECK(same.initial_distance == 0.0);
  CHECK(same.lhs <= same.gaps);
  CHECK(same.holds);
  const auto scaled = check_contraction(base(1, 0.5), v0, cutoff(v0, 0.9));
  CHECK(scaled.initial_distance == doctest::Approx(0.1));
  CHECK(scaled.holds);
  CHECK(scaled.lhs > 0.0);
}

TEST_CASE("converge_to_V checks its precondition") {
  auto r = base(1, 1.0);
  r.initial = RadialProfile::step(3.0, 1.0, 4.0);
  const double sch[] = {0.5};
  CHECK_THROWS_AS(converge_to_V(r, sch, 2.0, 0.5), ConfigError);
}

TEST_CASE("converge_to_V from V stays within the gaps") {
  const StationaryState s(1);
  auto r = base(1, 1.0);
  r.continuous = {[&s](double x) { return s.V(x); }, s.r_infinity()};
  const double sch[] = {0.5, 1.0};
  const auto rows = converge_to_V(r, sch, 1.0, 0.5);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.sup_deviation <= row.total_gap);
    CHECK(row.boundary.lo <= s.r_infinity());
    CHECK(row.boundary_distance < 0.1);
  }
}

TEST_CASE("mass movement starts undoubled") {
  const double grid[] = {0.0, 0.5};
  const auto rep = mass_movement_check(base(1, 0.5), 0.05, 2.0, grid);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].lower_at == 0.0);
  CHECK_FALSE(rep.doubled);
  CHECK(rep.rows[1].lower_at > 0.0);
  CHECK(rep.rows[1].lower_at <= rep.rows[1].upper_at);
  CHECK_THROWS_AS(mass_movement_check(base(1, 0.5), 0.6, 2.0, grid), ConfigError);
}
