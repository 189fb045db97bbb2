#include "bbees/sim/nbbm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbees/core/errors.hpp"

namespace bbees {

void SimParams::validate() const {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (population < 1) throw ConfigError("N must be >= 1");
  if (mode == SimMode::frozen_batch && !(batch_dt > 0.0)) throw ConfigError("batch_dt must be positive");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (!(record_times[i] >= 0.0) || (i > 0 && !(record_times[i] > record_times[i - 1]))) {
      throw ConfigError("record times must be nonnegative and strictly increasing");
    }
  }
}

void diffuse(std::vector<double>& coords, double dt, Rng& rng) {
  if (dt <= 0.0) return;
  std::normal_distribution<double> n(0.0, std::sqrt(2.0 * dt));
  for (double& x : coords) x += n(rng);
}

namespace {

class NbbmState {
 public:
  explicit NbbmState(const ParticleEnsemble& e) : d_(static_cast<std::size_t>(e.dim())), n_(e.population()),
      x_(e.coordinates().begin(), e.coordinates().end()) {}

  std::size_t size() const { return n_; }
  std::vector<double>& coords() { return x_; }

  void diffuse_by(double dt, Rng& rng) { diffuse(x_, dt, rng); }

  // Index of the furthest particle, lowest index on ties.
  std::size_t furthest(std::size_t event) {
    std::size_t best = 0;
    double m = -1.0;
    for (std::size_t k = 0; k < n_; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < d_; ++c) s += x_[k * d_ + c] * x_[k * d_ + c];
      if (!std::isfinite(s)) throw SimulationError("nonfinite particle position", event);
      if (s > m) {
        m = s;
        best = k;
      }
    }
    return best;
  }

  void copy(std::size_t from, std::size_t to) {
    std::copy_n(x_.begin() + static_cast<long>(from * d_), d_, x_.begin() + static_cast<long>(to * d_));
  }

  ParticleEnsemble ensemble(int dim, double clock) const { return ParticleEnsemble(dim, x_, clock); }

 private:
  std::size_t d_, n_;
  std::vector<double> x_;
};

}  // namespace

NbbmRun advance_nbbm(const SimParams& params, const ParticleEnsemble& state, double duration, Rng& rng) {
  params.validate();
  if (state.population() != params.population || state.dim() != params.dim) {
    throw DomainError("advance_nbbm: ensemble does not match N and dim");
  }
  if (!(duration >= 0.0)) throw DomainError("advance_nbbm: duration must be >= 0");

  const double start = state.clock();
  const double end = start + duration;
  const auto N = params.population;
  NbbmState s(state);
  NbbmRun run{state, {}, {}};

  auto rec = std::lower_bound(params.record_times.begin(), params.record_times.end(), start);
  const auto rec_end = std::upper_bound(params.record_times.begin(), params.record_times.end(), end);
  double t = start;
  // Diffuses to `until`, taking the snapshots that fall in (t, until].
  auto advance_to = [&](double until) {
    for (; rec != rec_end && *rec <= until; ++rec) {
      s.diffuse_by(*rec - t, rng);
      t = *rec;
      run.snapshots.push_back({t, s.ensemble(params.dim, t)});
    }
    s.diffuse_by(until - t, rng);
    t = until;
  };
  if (rec != rec_end && *rec == start) {
    run.snapshots.push_back({start, state});
    ++rec;
  }

  std::exponential_distribution<double> gap(static_cast<double>(N));
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  auto event = [&](double when) {
    const std::size_t k = pick(rng);
    const std::size_t l = s.furthest(run.events.size());
    s.copy(k, l);
    run.events.push_back({when, k + 1, l + 1});
  };

  if (params.mode == SimMode::exact) {
    for (;;) {
      const double te = t + gap(rng);
      if (te > end) break;
      advance_to(te);
      event(te);
    }
    advance_to(end);
  } else {
    std::vector<double> times;
    while (t < end) {
      const double w_end = std::min(end, t + params.batch_dt);
      const double w0 = t;
      advance_to(w_end);
      std::poisson_distribution<long> count(static_cast<double>(N) * (w_end - w0));
      const long m = count(rng);
      std::uniform_real_distribution<double> u(w0, w_end);
      times.resize(static_cast<std::size_t>(m));
      for (auto& x : times) x = u(rng);
      std::sort(times.begin(), times.end());
      for (double te : times) event(te);
    }
  }
  s.furthest(run.events.size());
  run.state = s.ensemble(params.dim, end);
  return run;
}

}  // namespace bbees
