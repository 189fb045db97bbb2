#include "bbees/sim/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "bbees/core/errors.hpp"
#include "bbees/core/particle_ensemble.hpp"

namespace bbees {

namespace {

using Vec = std::vector<double>;

double norm(const Vec& v) { return euclidean_norm(v); }

// Householder reflection H with H from = to, for |from| = |to|.
struct Reflection {
  Vec v;
  double vv = 0.0;

  Reflection(const Vec& from, const Vec& to) : v(from.size()) {
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = from[c] - to[c];
    for (double a : v) vv += a * a;
  }
  bool identity() const { return vv == 0.0; }
  Vec apply(const Vec& y) const {
    if (identity()) return y;
    double dot = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) dot += v[c] * y[c];
    Vec out(y);
    for (std::size_t c = 0; c < v.size(); ++c) out[c] -= 2.0 * dot / vv * v[c];
    return out;
  }
};

// Shrinks y until |y| <= r (1 - 2^-50), absorbing rounding in the reflection
// with room for any faithfully rounded norm evaluation.
void clamp_norm(Vec& y, double r) {
  const double target = r * (1.0 - 0x1p-50);
  while (norm(y) > target) {
    for (double& a : y) a *= 1.0 - 0x1p-52;
  }
}

class PairWalker {
 public:
  PairWalker(Vec b, Vec bp, Rng& rng, const PairOptions& opt)
      : b_(std::move(b)), bp_(std::move(bp)), rng_(rng), opt_(opt), d_(b_.size()) {
    if (norm(b_) >= norm(bp_)) couple(b_, bp_);
  }

  bool coupled() const { return coupled_; }
  double coupling_time() const { return tc_; }
  const Vec& b() const { return b_; }
  const Vec& b_plus() const { return bp_; }

  void advance(double dt) {
    if (dt <= 0.0) return;
    if (coupled_) {
      step_plus(dt);
      return;
    }
    const double h = dt / opt_.substeps;
    for (int k = 0; k < opt_.substeps; ++k) {
      if (coupled_) {
        step_plus(h);
        continue;
      }
      const Vec b0 = b_, p0 = bp_;
      step(b_, h);
      step(bp_, h);
      if (norm(b_) >= norm(bp_)) locate(b0, p0, h);
      t_ += h;
    }
  }

 private:
  void step(Vec& y, double dt) {
    std::normal_distribution<double> n(0.0, std::sqrt(2.0 * dt));
    for (double& a : y) a += n(rng_);
  }

  void step_plus(double dt) {
    Vec inc(d_, 0.0);
    step(inc, dt);
    for (std::size_t c = 0; c < d_; ++c) bp_[c] += inc[c];
    const Vec r = theta_->apply(inc);
    for (std::size_t c = 0; c < d_; ++c) b_[c] += r[c];
    if (!theta_->identity()) clamp_norm(b_, norm(bp_));
  }

  // Bisects the bridges on [t_, t_ + h] to a time where the norms nearly meet,
  // couples there and carries the coupled pair to t_ + h.
  void locate(Vec b0, Vec p0, double h) {
    Vec b1 = b_, p1 = bp_;
    double lo = 0.0, hi = h;
    for (int k = 0; k < opt_.bisections && norm(b1) - norm(p1) > 1e-14; ++k) {
      const double len = hi - lo;
      std::normal_distribution<double> n(0.0, std::sqrt(len / 2.0));
      Vec bm(d_), pm(d_);
      for (std::size_t c = 0; c < d_; ++c) {
        bm[c] = 0.5 * (b0[c] + b1[c]) + n(rng_);
        pm[c] = 0.5 * (p0[c] + p1[c]) + n(rng_);
      }
      if (norm(bm) >= norm(pm)) {
        b1 = bm;
        p1 = pm;
        hi = lo + 0.5 * len;
      } else {
        b0 = bm;
        p0 = pm;
        lo += 0.5 * len;
      }
    }
    tc_ = t_ + hi;
    couple(b1, p1);
    const double rest = h - hi;
    if (rest > 0.0) {
      // B+ continues as a bridge to its already sampled value at t_ + h.
      const Vec target = bp_;
      Vec inc(d_);
      for (std::size_t c = 0; c < d_; ++c) inc[c] = target[c] - p1[c];
      bp_ = target;
      const Vec r = theta_->apply(inc);
      for (std::size_t c = 0; c < d_; ++c) b_[c] += r[c];
      if (!theta_->identity()) clamp_norm(b_, norm(bp_));
    }
  }

  void couple(Vec b, const Vec& p) {
    const double rb = norm(b), rp = norm(p);
    if (rb > 0.0) {
      for (double& a : b) a *= rp / rb;
    } else {
      b = p;
    }
    theta_.emplace(p, b);
    b_ = theta_->apply(p);
    bp_ = p;
    if (!theta_->identity()) clamp_norm(b_, norm(bp_));
    coupled_ = true;
  }

  Vec b_, bp_;
  Rng& rng_;
  PairOptions opt_;
  std::size_t d_;
  double t_ = 0.0;
  double tc_ = 0.0;
  bool coupled_ = false;
  std::optional<Reflection> theta_;
};

}  // namespace

PairedPaths spherically_ordered_pair(std::span<const double> x, std::span<const double> x_plus,
                                     std::span<const double> times, Rng& rng, const PairOptions& opt) {
  if (x.size() != x_plus.size() || x.empty()) throw DomainError("spherically_ordered_pair: dimension mismatch");
  if (euclidean_norm(x) > euclidean_norm(x_plus)) throw DomainError("spherically_ordered_pair: need |x| <= |x_plus|");
  if (opt.substeps < 1 || opt.bisections < 0) throw DomainError("spherically_ordered_pair: invalid options");
  PairedPaths out;
  out.dim = static_cast<int>(x.size());
  PairWalker w(Vec(x.begin(), x.end()), Vec(x_plus.begin(), x_plus.end()), rng, opt);
  double t = 0.0;
  for (double s : times) {
    if (!(s >= t)) throw DomainError("spherically_ordered_pair: times must be nonnegative and nondecreasing");
    w.advance(s - t);
    t = s;
    out.times.push_back(s);
    out.b.insert(out.b.end(), w.b().begin(), w.b().end());
    out.b_plus.insert(out.b_plus.end(), w.b_plus().begin(), w.b_plus().end());
  }
  out.coupled = w.coupled();
  out.coupling_time = w.coupling_time();
  return out;
}

std::vector<SurvivalEstimate> killed_survival_curve(std::span<const double> x, const RadiusFunction& boundary,
                                                    std::span<const double> times, std::size_t n_samples,
                                                    Rng& rng, double spacing, const PointPredicate& target) {
  if (n_samples < 1) throw DomainError("killed_survival_curve: need at least one sample");
  if (times.empty()) return {};
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("killed_survival_curve: times must be positive and increasing");
    }
  }
  const double t_max = times.back();
  const double h0 = spacing > 0.0 ? spacing : 1e-3 * t_max;
  // Grid: uniform steps of at most h0 between consecutive requested times.
  std::vector<double> grid{0.0};
  std::vector<std::size_t> mark;
  for (double t : times) {
    const double a = grid.back();
    const auto m = static_cast<std::size_t>(std::ceil((t - a) / h0 - 1e-9));
    for (std::size_t k = 1; k <= m; ++k) grid.push_back(k == m ? t : a + (t - a) * static_cast<double>(k) / m);
    mark.push_back(grid.size() - 1);
  }
  std::vector<double> R(grid.size());
  for (std::size_t k = 1; k < grid.size(); ++k) R[k] = boundary(grid[k]);

  std::vector<std::size_t> hits(times.size(), 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> sd(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) sd[k] = std::sqrt(2.0 * (grid[k] - grid[k - 1]));
  Vec y(x.size());
  for (std::size_t n = 0; n < n_samples; ++n) {
    std::copy(x.begin(), x.end(), y.begin());
    std::size_t next = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      double s = 0.0;
      for (double& a : y) {
        a += sd[k] * normal(rng);
        s += a * a;
      }
      if (!(s < R[k] * R[k])) break;
      if (k == mark[next]) {
        if (!target || target(y)) ++hits[next];
        if (++next == mark.size()) break;
      }
    }
  }
  std::vector<SurvivalEstimate> out;
  for (std::size_t i = 0; i < times.size(); ++i) {
    SurvivalEstimate e;
    e.t = times[i];
    e.fraction = static_cast<double>(hits[i]) / static_cast<double>(n_samples);
    const double g = std::exp(e.t);
    e.estimate = g * e.fraction;
    e.std_error = g * std::sqrt(e.fraction * (1.0 - e.fraction) / static_cast<double>(n_samples));
    out.push_back(e);
  }
  return out;
}

SurvivalEstimate killed_survival_density(std::span<const double> x, const RadiusFunction& boundary, double t,
                                         std::size_t n_samples, const PointPredicate& target, Rng& rng,
                                         double spacing) {
  const double ts[] = {t};
  return killed_survival_curve(x, boundary, ts, n_samples, rng, spacing, target).front();
}

}  // namespace bbees
