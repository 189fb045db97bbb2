#include "bbees/obstacle/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "band_propagator.hpp"
#include "bbees/core/errors.hpp"
#include "bbees/kernel/bessel_zero.hpp"
#include "bbees/kernel/operators.hpp"

namespace bbees {

namespace {

// Cell increments below this are dropped (their mass enters the error budget);
// it sits well above the roundoff noise of values near 1.
constexpr double kActive = 1e-14;

// Piecewise-linear function on r_i = i h, constant beyond the last node. In
// cell `kink` it rises linearly to `level` at r_kink + theta h and stays flat.
struct Nodal {
  std::vector<double> f;
  long kink = -1;
  double theta = 0.0;
  double level = 0.0;

  double at(double r, double h) const {
    const auto n = static_cast<long>(f.size()) - 1;
    if (r <= 0.0) return f[0];
    const double x = r / h;
    const auto i = static_cast<long>(std::floor(x));
    if (i >= n) return f[n];
    const double s = x - static_cast<double>(i);
    if (i == kink) return s < theta ? f[i] + (level - f[i]) * s / theta : level;
    return f[i] + (f[i + 1] - f[i]) * s;
  }
};

// min(f, m), exact for a piecewise-linear f without a kink.
void cut(Nodal& p, double m) {
  auto& f = p.f;
  const auto it = std::find_if(f.begin(), f.end(), [m](double v) { return v > m; });
  if (it == f.end()) return;
  const auto i = static_cast<long>(it - f.begin());
  if (i > 0) {
    const double lo = f[i - 1];
    const double theta = (m - lo) / (f[i] - lo);
    if (theta > 0.0) {
      p.kink = i - 1;
      p.theta = theta;
      p.level = m;
    }
  }
  std::fill(it, f.end(), m);
}

// 0.25 * max |second difference| over neighbouring nodes: twice the
// interpolation error bound h^2 |f''| / 8 of each adjacent cell.
std::vector<double> pads(const std::vector<double>& T) {
  const std::size_t n = T.size();
  std::vector<double> d2(n, 0.0), pad(n, 0.0);
  if (n < 3) return pad;
  for (std::size_t i = 1; i + 1 < n; ++i) d2[i] = std::abs(T[i + 1] - 2.0 * T[i] + T[i - 1]);
  d2[0] = d2[1];
  d2[n - 1] = d2[n - 2];
  for (std::size_t i = 0; i < n; ++i) {
    double m = d2[i];
    if (i > 0) m = std::max(m, d2[i - 1]);
    if (i + 1 < n) m = std::max(m, d2[i + 1]);
    pad[i] = 0.25 * m;
  }
  return pad;
}

struct Propagated {
  std::vector<double> T;
  double kernel_error = 0.0;
};

class Engine {
 public:
  Engine(const KernelContext& ctx, double delta, double h, std::size_t nodes, int workers)
      : ctx_(ctx), delta_(delta), h_(h), n_(nodes - 1), workers_(workers),
        prop_(detail::BandPropagator::shared(ctx, delta, h)) {}

  double h() const { return h_; }
  std::size_t last() const { return n_; }

  void require_rows(std::size_t i_max) const {
    if (i_max > n_) {
      throw ResourceError("solver grid too small: needs node " + std::to_string(i_max) + " of " +
                          std::to_string(n_) + "; increase the domain cap");
    }
  }

  // e^delta G_delta f at every node.
  Propagated propagate(const Nodal& p) const {
    const auto& f = p.f;
    const std::size_t n = n_;
    const std::size_t B = prop_->half_width();
    const double ed = std::exp(delta_);
    Propagated out;
    out.T.assign(n + 1, 0.0);

    long ja = -1, jb = -1;
    double skipped = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = f[j + 1] - f[j];
      if (c > kActive || static_cast<long>(j) == p.kink) {
        if (ja < 0) ja = static_cast<long>(j);
        jb = static_cast<long>(j);
      }
    }
    const std::size_t i_max = (jb < 0 ? 0 : static_cast<std::size_t>(jb)) + B + 1;
    require_rows(i_max);
    for (std::size_t j = 0; j < n; ++j) {
      const auto lj = static_cast<long>(j);
      if (lj < ja || lj > jb || ja < 0) skipped += std::max(0.0, f[j + 1] - f[j]);
    }
    const auto rows = prop_->rows(i_max + 1, workers_);

    // Prefix sums of cell increments over the active range.
    std::vector<double> P;
    if (ja >= 0) {
      P.assign(static_cast<std::size_t>(jb - ja + 2), 0.0);
      for (long j = ja; j <= jb; ++j) P[j - ja + 1] = P[j - ja] + (f[j + 1] - f[j]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i <= i_max; ++i) {
      const auto& row = *rows[i];
      err = std::max(err, row.err);
      double s = f[0] * row.w0;
      if (ja >= 0) {
        const long lo = static_cast<long>(row.lo);
        const long hi = static_cast<long>(i + B);
        const long left_end = std::min(jb + 1, lo);
        if (left_end > ja) s += P[left_end - ja];
        const long b0 = std::max(lo, ja), b1 = std::min(hi, jb);
        for (long j = b0; j <= b1; ++j) {
          const double c = f[j + 1] - f[j];
          if (j == p.kink) {
            s += c * partial_average(p, static_cast<double>(i) * h_);
          } else {
            s += c * row.a[static_cast<std::size_t>(j - lo)];
          }
        }
      }
      out.T[i] = ed * s;
    }
    // Beyond the last row every active cell lies to the left: w = 1 up to e^{-40}.
    const double tail = ed * (f[0] + (P.empty() ? 0.0 : P.back()));
    std::fill(out.T.begin() + static_cast<long>(i_max) + 1, out.T.end(), tail);
    out.kernel_error = ed * ((err + ctx_.tolerance) * f[n] + skipped);
    return out;
  }

  // e^delta sum_j c_j w(a_j, r_i, delta) for the jumps of a step profile.
  Propagated propagate_steps(const RadialProfile& v) const {
    const double ed = std::exp(delta_);
    const double reach = prop_->reach();
    Propagated out;
    out.T.assign(n_ + 1, ed * v.terminal_value());
    if (v.empty()) return out;
    const auto jumps = v.jumps();
    std::vector<double> loc, c, cum;
    double prev = 0.0;
    cum.push_back(0.0);
    for (const auto& j : jumps) {
      loc.push_back(j.location);
      c.push_back(j.value - prev);
      cum.push_back(cum.back() + (j.value - prev));
      prev = j.value;
    }
    const auto i_max = static_cast<std::size_t>(std::ceil((loc.back() + reach) / h_)) + 1;
    require_rows(i_max);
    for (std::size_t i = 0; i <= i_max; ++i) {
      const double r = static_cast<double>(i) * h_;
      const auto a = static_cast<std::size_t>(std::lower_bound(loc.begin(), loc.end(), r - reach) - loc.begin());
      const auto b = static_cast<std::size_t>(std::upper_bound(loc.begin(), loc.end(), r + reach) - loc.begin());
      double s = cum[a];
      for (std::size_t k = a; k < b; ++k) s += c[k] * radial_cdf(ctx_, loc[k], r, delta_);
      out.T[i] = ed * s;
    }
    out.kernel_error = ed * ctx_.tolerance * v.terminal_value();
    return out;
  }

 private:
  double partial_average(const Nodal& p, double r) const {
    const double a = static_cast<double>(p.kink) * h_;
    const double len = p.theta * h_;
    return (radial_cdf(ctx_, a, r, delta_) + 4.0 * radial_cdf(ctx_, a + 0.5 * len, r, delta_) +
            radial_cdf(ctx_, a + len, r, delta_)) / 6.0;
  }

  KernelContext ctx_;
  double delta_;
  double h_;
  std::size_t n_;
  int workers_;
  std::shared_ptr<detail::BandPropagator> prop_;
};

// Rounds up by the interpolation pad plus the kernel error, then applies C_1.
Nodal upper_from(const std::vector<double>& T, const std::vector<double>& pad, double kerr) {
  Nodal u;
  u.f.resize(T.size());
  double run = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    run = std::max(run, T[i] + pad[i] + kerr);
    u.f[i] = run;
  }
  cut(u, 1.0);
  return u;
}

Nodal lower_from(const std::vector<double>& T, const std::vector<double>& pad, double kerr) {
  Nodal l;
  l.f.resize(T.size());
  double run = 1.0;
  for (std::size_t k = T.size(); k-- > 0;) {
    // Nodes may go negative: clamping them before interpolation would lose the pad.
    run = std::min(run, T[k] - pad[k] - kerr);
    l.f[k] = run;
  }
  return l;
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// Index after which the nodal function is constant.
std::size_t settled_index(const Nodal& p) {
  std::size_t e = p.f.size() - 1;
  while (e > 0 && p.f[e - 1] == p.f[e]) --e;
  if (p.kink >= 0) e = std::max(e, static_cast<std::size_t>(p.kink) + 1);
  return e;
}

struct Converted {
  RadialProfile lower, upper;
  double error = 0.0;
};

Converted to_steps(const Nodal& lo, const Nodal& up, double h, int refine, double cap) {
  const double hs = h / refine;
  Converted out;
  double eu = 0.0, el = 0.0;
  {
    const std::size_t m_end = settled_index(up) * static_cast<std::size_t>(refine);
    std::vector<RadialProfile::Jump> nodes;
    nodes.reserve(m_end + 1);
    double prev = up.at(0.0, h);
    for (std::size_t m = 0; m < m_end; ++m) {
      const double v = up.at(static_cast<double>(m + 1) * hs, h);
      nodes.push_back({static_cast<double>(m) * hs, v});
      eu = std::max(eu, v - prev);
      prev = v;
    }
    nodes.push_back({static_cast<double>(m_end) * hs, up.f.back()});
    out.upper = RadialProfile::from_nodes(nodes, cap);
  }
  {
    const std::size_t m_end = settled_index(lo) * static_cast<std::size_t>(refine);
    std::vector<RadialProfile::Jump> nodes;
    nodes.reserve(m_end + 1);
    double prev = 0.0;
    for (std::size_t m = 0; m <= m_end; ++m) {
      const double v = lo.at(static_cast<double>(m) * hs, h);
      nodes.push_back({static_cast<double>(m) * hs, v});
      el = std::max(el, v - prev);
      prev = v;
    }
    out.lower = RadialProfile::from_nodes(nodes, cap);
  }
  out.error = eu + el;
  return out;
}

// Extremes of upper - lower over nodes and kink points.
std::pair<double, double> gap_range(const Nodal& lo, const Nodal& up, double h) {
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  auto visit = [&](double r) {
    const double g = up.at(r, h) - lo.at(r, h);
    mx = std::max(mx, g);
    mn = std::min(mn, g);
  };
  for (std::size_t i = 0; i < up.f.size(); ++i) visit(static_cast<double>(i) * h);
  for (const Nodal* p : {&lo, &up}) {
    if (p->kink >= 0) visit((static_cast<double>(p->kink) + p->theta) * h);
  }
  return {mx, mn};
}

}  // namespace

double analytic_gap(int steps, double delta) {
  return (std::exp(steps * delta) + 1.0) * std::expm1(delta);
}

void SolveRequest::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("SolveRequest: horizon must be positive");
  if (!(step_size > 0.0) && !(target_gap > 0.0)) throw DomainError("SolveRequest: need step_size or target_gap > 0");
  if (step_size < 0.0 || target_gap < 0.0) throw DomainError("SolveRequest: step_size and target_gap must be >= 0");
  if (grid.spacing < 0.0 || grid.domain_cap < 0.0 || grid.refine < 1 || grid.workers < 1) {
    throw DomainError("SolveRequest: invalid grid policy");
  }
  if (has_continuous_initial()) {
    if (!(continuous.support >= 0.0)) throw DomainError("SolveRequest: continuous initial needs support >= 0");
  } else if (initial.has_jump_at_origin()) {
    throw DomainError("SolveRequest: initial profile must not jump at r = 0");
  }
}

int SolveRequest::steps() const {
  double d = step_size;
  if (!(d > 0.0)) d = target_gap / (2.0 * (std::exp(horizon) + 1.0) * std::numbers::e);
  return std::max(1, static_cast<int>(std::ceil(horizon / d - 1e-9)));
}

double SolveRequest::delta() const { return horizon / steps(); }

std::vector<SandwichPair> solve_sandwich_path(const SolveRequest& req, std::span<const double> times) {
  req.validate();
  const KernelContext& ctx = req.ctx;
  const int k_total = req.steps();
  const double delta = req.delta();

  std::vector<int> wanted;
  for (double t : times) {
    if (t < 0.0 || t > req.horizon * (1.0 + 1e-12)) throw DomainError("solve_sandwich_path: time outside [0, horizon]");
    wanted.push_back(static_cast<int>(std::lround(t / delta)));
  }

  const double h = req.grid.spacing > 0.0 ? req.grid.spacing : 2e-3 * dirichlet_radius(ctx.dim);
  const double reach = std::sqrt(2.0 * delta) * (std::sqrt(static_cast<double>(ctx.dim)) + 9.0);
  const double support = req.has_continuous_initial() ? req.continuous.support : req.initial.last_location();
  double cap = req.grid.domain_cap;
  if (cap <= 0.0) cap = support + 12.0 * std::sqrt(2.0 * req.horizon) + 2.0 * reach;
  const auto n = static_cast<std::size_t>(std::ceil(cap / h));
  const double out_cap = static_cast<double>(n + 1) * h;
  Engine eng(ctx, delta, h, n + 1, req.grid.workers);
  const double ed = std::exp(delta);

  Nodal up, lo;
  double eps_up = 0.0, eps_lo = 0.0;
  bool nodal = req.has_continuous_initial();
  if (nodal) {
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = std::clamp(req.continuous.value(static_cast<double>(i) * h), 0.0, 1.0);
    const auto pad = pads(g);
    up = upper_from(g, pad, 0.0);
    lo = lower_from(g, pad, 0.0);
    eps_up = eps_lo = 2.0 * max_of(pad);
  }

  std::vector<SandwichPair> out(wanted.size());
  std::vector<StepRecord> history;
  auto emit = [&](int k) {
    for (std::size_t q = 0; q < wanted.size(); ++q) {
      if (wanted[q] != k) continue;
      SandwichPair& p = out[q];
      if (!nodal) {
        // Still the exact initial profile.
        p.lower = req.initial.with_cap(std::max(out_cap, req.initial.domain_cap()));
        p.upper = p.lower;
        p.grid_gap = 0.0;
      } else {
        const auto conv = to_steps(lo, up, h, req.grid.refine, out_cap);
        p.lower = conv.lower;
        p.upper = conv.upper;
        p.grid_gap = eps_up + eps_lo + conv.error;
      }
      p.analytic_gap = analytic_gap(k, delta);
      p.steps_taken = k;
      p.step_size = delta;
      p.history = history;
    }
  };
  emit(0);

  for (int k = 1; k <= k_total; ++k) {
    Propagated tu, tl;
    if (!nodal) {
      tu = eng.propagate_steps(req.initial);
      tl = eng.propagate_steps(cutoff(req.initial, std::exp(-delta)));
      nodal = true;
    } else {
      tu = eng.propagate(up);
      Nodal lc = lo;
      cut(lc, std::exp(-delta));
      tl = eng.propagate(lc);
    }
    const auto pu = pads(tu.T);
    const auto pl = pads(tl.T);
    up = upper_from(tu.T, pu, tu.kernel_error);
    lo = lower_from(tl.T, pl, tl.kernel_error);
    eps_up = ed * eps_up + 2.0 * (max_of(pu) + tu.kernel_error);
    eps_lo = ed * eps_lo + 2.0 * (max_of(pl) + tl.kernel_error);

    const auto [mx, mn] = gap_range(lo, up, h);
    history.push_back({k, mx, mn, analytic_gap(k, delta), eps_up + eps_lo});
    emit(k);
  }
  return out;
}

SandwichPair solve_sandwich(const SolveRequest& req) {
  const double t = req.horizon;
  return solve_sandwich_path(req, std::span<const double>(&t, 1)).front();
}

RadialProfile step_plus(const KernelContext& ctx, const RadialProfile& v, double delta, double spacing) {
  if (!(delta > 0.0)) throw DomainError("step_plus: delta must be positive");
  GridOptions g;
  g.spacing = spacing;
  const auto r = apply_Gt_rounded(ctx, v, delta, Rounding::upper, g);
  std::vector<RadialProfile::Jump> nodes(r.profile.jumps().begin(), r.profile.jumps().end());
  for (auto& j : nodes) j.value = std::min(1.0, std::exp(delta) * j.value);
  return RadialProfile::from_nodes(nodes, r.profile.domain_cap());
}

RadialProfile step_minus(const KernelContext& ctx, const RadialProfile& v, double delta, double spacing) {
  if (!(delta > 0.0)) throw DomainError("step_minus: delta must be positive");
  GridOptions g;
  g.spacing = spacing;
  const auto r = apply_Gt_rounded(ctx, cutoff(v, std::exp(-delta)), delta, Rounding::lower, g);
  std::vector<RadialProfile::Jump> nodes(r.profile.jumps().begin(), r.profile.jumps().end());
  for (auto& j : nodes) j.value = std::min(1.0, std::exp(delta) * j.value);
  return RadialProfile::from_nodes(nodes, r.profile.domain_cap());
}

double BoundaryInterval::distance(double r) const {
  if (r < lo) return lo - r;
  if (r > hi) return r - hi;
  return 0.0;
}

double free_boundary_radius(const RadialProfile& v, double tol) {
  for (const auto& j : v.jumps()) {
    if (j.value >= 1.0 - tol) return j.location;
  }
  return std::numeric_limits<double>::infinity();
}

BoundaryInterval free_boundary_radius(const SandwichPair& pair, double tol) {
  // Both ends bracket inf{r : v(r) >= 1 - t} for the true v; a small t keeps that level near 1.
  const double t = tol + std::min(pair.grid_gap, pair.measured_gap());
  return {free_boundary_radius(pair.upper, t), free_boundary_radius(pair.lower, t)};
}

}  // namespace bbees
