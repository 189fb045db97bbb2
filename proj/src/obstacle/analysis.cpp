#include "bbees/obstacle/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "bbees/core/errors.hpp"
#include "bbees/obstacle/stationary.hpp"

namespace bbees {

ContractionReport check_contraction(const SolveRequest& base, const RadialProfile& v0, const RadialProfile& w0) {
  SolveRequest a = base, b = base;
  a.initial = v0;
  b.initial = w0;
  a.continuous = b.continuous = {};
  const auto pa = solve_sandwich(a);
  const auto pb = solve_sandwich(b);
  ContractionReport rep;
  rep.initial_distance = sup_distance(v0, w0);
  rep.lhs = sup_distance(pa.mid(), pb.mid());
  rep.gaps = pa.total_gap() + pb.total_gap();
  rep.rhs = std::exp(base.horizon) * rep.initial_distance + rep.gaps;
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

std::vector<ConvergenceRow> converge_to_V(const SolveRequest& req, std::span<const double> schedule, double K,
                                          double c) {
  const double at_K = req.has_continuous_initial() ? req.continuous.value(K) : req.initial(K);
  if (!(at_K >= c)) throw ConfigError("converge_to_V: initial profile must satisfy v0(K) >= c");
  if (schedule.empty()) return {};
  SolveRequest r = req;
  r.horizon = *std::max_element(schedule.begin(), schedule.end());
  const auto path = solve_sandwich_path(r, schedule);
  const StationaryState s(req.ctx.dim);
  const auto V = [&s](double x) { return s.V(x); };
  std::vector<ConvergenceRow> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    ConvergenceRow row;
    row.t = schedule[i];
    row.sup_deviation = sup_distance(path[i].mid(), V, 1.0);
    row.boundary = free_boundary_radius(path[i]);
    row.boundary_distance = row.boundary.distance(s.r_infinity());
    row.total_gap = path[i].total_gap();
    out.push_back(row);
  }
  return out;
}

MassMovementReport mass_movement_check(const SolveRequest& base, double c, double K, std::span<const double> t_grid) {
  if (!(c > 0.0 && c < 0.5) || !(K >= 2.0)) throw ConfigError("mass_movement_check: need c in (0, 1/2) and K >= 2");
  MassMovementReport rep;
  if (t_grid.empty()) return rep;
  SolveRequest r = base;
  r.continuous = {};
  r.initial = RadialProfile::step(K, c, K + 1.0);
  r.horizon = std::max(*std::max_element(t_grid.begin(), t_grid.end()), 1e-12);
  const auto path = solve_sandwich_path(r, t_grid);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const MassMovementRow row{t_grid[i], path[i].lower(K - 1.0), path[i].upper(K - 1.0)};
    rep.rows.push_back(row);
    if (!rep.doubled && row.lower_at >= 2.0 * c) {
      rep.doubled = true;
      rep.t1 = row.t;
    }
  }
  return rep;
}

}  // namespace bbees
