#include "bbees/kernel/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bbees/core/errors.hpp"
#include "bbees/kernel/bessel_zero.hpp"

namespace bbees {

double GridFunction::operator()(double x) const {
  if (r.empty()) return 0.0;
  if (x <= r.front()) return value.front();
  if (x >= r.back()) return value.back();
  const auto it = std::upper_bound(r.begin(), r.end(), x);
  const auto i = static_cast<std::size_t>(it - r.begin());
  const double th = (x - r[i - 1]) / (r[i] - r[i - 1]);
  return value[i - 1] + th * (value[i] - value[i - 1]);
}

double GridFunction::max_value() const {
  return value.empty() ? 0.0 : *std::max_element(value.begin(), value.end());
}

double mixture_value(const KernelContext& ctx, const RadialProfile& f, double r, double t) {
  double s = 0.0;
  double prev = 0.0;
  for (const auto& j : f.jumps()) {
    s += (j.value - prev) * radial_cdf(ctx, j.location, r, t);
    prev = j.value;
  }
  return s;
}

std::vector<double> output_grid(const KernelContext& ctx, const RadialProfile& f, double t, const GridOptions& grid) {
  const double h = grid.spacing > 0.0 ? grid.spacing : 2e-3 * dirichlet_radius(ctx.dim);
  double cap = grid.domain_cap;
  if (cap <= 0.0) cap = std::max(f.domain_cap(), f.last_location() + 12.0 * std::sqrt(2.0 * t));
  const auto n = static_cast<std::size_t>(std::ceil(cap / h));
  std::vector<double> x;
  x.reserve(n + 1 + f.size());
  for (std::size_t i = 0; i <= n; ++i) x.push_back(static_cast<double>(i) * h);
  for (const auto& j : f.jumps()) x.push_back(j.location);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

RoundedProfile apply_Gt_rounded(const KernelContext& ctx, const RadialProfile& f, double t, Rounding mode,
                                const GridOptions& grid) {
  if (!(t > 0.0)) throw DomainError("apply_Gt: t must be positive");
  if (f.empty()) return {RadialProfile::zero(f.domain_cap()), 0.0};
  const auto x = output_grid(ctx, f, t, grid);
  std::vector<double> F(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) F[i] = mixture_value(ctx, f, x[i], t);
  for (std::size_t i = 1; i < F.size(); ++i) F[i] = std::max(F[i], F[i - 1]);
  const double mass = f.terminal_value();
  const double cap = x.back() + (x.size() > 1 ? x[1] - x[0] : 1.0);

  double err = mass - F.back();
  for (std::size_t i = 0; i + 1 < F.size(); ++i) err = std::max(err, F[i + 1] - F[i]);

  std::vector<RadialProfile::Jump> nodes;
  nodes.reserve(x.size());
  if (mode == Rounding::upper) {
    // Cell (x_i, x_{i+1}] takes the value at its right end; beyond the grid, the total mass.
    for (std::size_t i = 0; i + 1 < x.size(); ++i) nodes.push_back({x[i], F[i + 1]});
    nodes.push_back({x.back(), mass});
  } else {
    // Cell (x_i, x_{i+1}] takes the value at its left end.
    for (std::size_t i = 0; i < x.size(); ++i) nodes.push_back({x[i], F[i]});
  }
  return {RadialProfile::from_nodes(nodes, cap), std::max(0.0, err)};
}

RadialProfile apply_Gt(const KernelContext& ctx, const RadialProfile& f, double t, Rounding mode,
                       const GridOptions& grid) {
  return apply_Gt_rounded(ctx, f, t, mode, grid).profile;
}

RadialProfile cutoff(const RadialProfile& f, double m) {
  if (m <= 0.0) return RadialProfile::zero(f.domain_cap());
  std::vector<RadialProfile::Jump> out;
  for (const auto& j : f.jumps()) {
    if (!out.empty() && out.back().value >= m) break;
    out.push_back({j.location, std::min(j.value, m)});
  }
  return RadialProfile(std::move(out), f.domain_cap());
}

GridFunction linear_evolve(const KernelContext& ctx, const RadialProfile& f0, double t, const GridOptions& grid) {
  if (!(t > 0.0)) throw DomainError("linear_evolve: t must be positive");
  GridFunction out;
  out.clamped = false;
  out.r = output_grid(ctx, f0, t, grid);
  out.value.resize(out.r.size());
  const double et = std::exp(t);
  for (std::size_t i = 0; i < out.r.size(); ++i) out.value[i] = et * mixture_value(ctx, f0, out.r[i], t);
  return out;
}

}  // namespace bbees
