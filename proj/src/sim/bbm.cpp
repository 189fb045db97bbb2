#include "bbees/sim/bbm.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "bbees/core/errors.hpp"
#include "bbees/core/radial_profile.hpp"

namespace bbees {

bool UlamLabel::is_ancestor_of(const UlamLabel& other) const {
  return root == other.root && other.path.size() >= path.size() && other.path.compare(0, path.size(), path) == 0;
}

std::string UlamLabel::to_string() const {
  std::string s = std::to_string(root);
  for (char c : path) {
    s += '.';
    s += c;
  }
  return s;
}

BbmForest BbmForest::from_ensemble(const ParticleEnsemble& e) {
  BbmForest f;
  f.dim = e.dim();
  f.clock = e.clock();
  f.coords.assign(e.coordinates().begin(), e.coordinates().end());
  for (std::size_t k = 0; k < e.population(); ++k) f.labels.push_back({static_cast<std::uint32_t>(k + 1), {}});
  return f;
}

ParticleEnsemble BbmForest::ensemble() const { return ParticleEnsemble(dim, coords, clock); }

namespace {

void check_cap(std::size_t size, std::size_t cap) {
  if (size + 1 > cap) throw ResourceError("BBM population would exceed the cap of " + std::to_string(cap));
}

// Appends a copy of particle i as its second child and relabels i as the first.
void split(BbmForest& f, std::size_t i) {
  const auto d = static_cast<std::size_t>(f.dim);
  for (std::size_t c = 0; c < d; ++c) f.coords.push_back(f.coords[i * d + c]);
  f.labels.push_back(f.labels[i].child(2));
  f.labels[i] = f.labels[i].child(1);
  if (!f.colour.empty()) f.colour.push_back(f.colour[i]);
}

double norm2(const std::vector<double>& x, std::size_t i, std::size_t d) {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) s += x[i * d + c] * x[i * d + c];
  return s;
}

// x -> (number of entries < x) / N, capped at 1.
RadialProfile count_profile(std::vector<double> norms, std::size_t N) {
  std::sort(norms.begin(), norms.end());
  std::vector<RadialProfile::Jump> j;
  j.reserve(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) {
    j.push_back({norms[i], static_cast<double>(i + 1) / static_cast<double>(N)});
  }
  const double cap = norms.empty() ? 1.0 : norms.back() + 1.0;
  return RadialProfile::from_nodes(j, cap);
}

}  // namespace

BbmForest advance_bbm(const BbmForest& forest, double duration, Rng& rng, std::size_t cap) {
  if (!(duration >= 0.0)) throw DomainError("advance_bbm: duration must be >= 0");
  BbmForest f = forest;
  const auto d = static_cast<std::size_t>(f.dim);
  const double end = f.clock + duration;
  std::vector<double> last(f.size(), f.clock);
  std::exponential_distribution<double> clock(1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t i = 0; i < f.size(); ++i) queue.push({f.clock + clock(rng), i});

  auto bring = [&](std::size_t i, double t) {
    const double sd = std::sqrt(2.0 * (t - last[i]));
    if (sd > 0.0) {
      for (std::size_t c = 0; c < d; ++c) f.coords[i * d + c] += sd * normal(rng);
    }
    last[i] = t;
  };

  while (!queue.empty() && queue.top().first <= end) {
    const auto [tau, i] = queue.top();
    queue.pop();
    bring(i, tau);
    check_cap(f.size(), cap);
    split(f, i);
    last.push_back(tau);
    queue.push({tau + clock(rng), i});
    queue.push({tau + clock(rng), f.size() - 1});
  }
  for (std::size_t i = 0; i < f.size(); ++i) bring(i, end);
  f.clock = end;
  return f;
}

CoupledRun coupled_run(const SimParams& params, const ParticleEnsemble& initial, double duration, Rng& rng,
                       std::size_t cap) {
  params.validate();
  if (initial.population() != params.population || initial.dim() != params.dim) {
    throw DomainError("coupled_run: ensemble does not match N and dim");
  }
  if (!(duration >= 0.0)) throw DomainError("coupled_run: duration must be >= 0");
  const std::size_t N = params.population;
  const auto d = static_cast<std::size_t>(params.dim);
  BbmForest f = BbmForest::from_ensemble(initial);
  f.colour.assign(N, Colour::blue);
  std::vector<char> violated(N, 0);
  CoupledRun run{initial, f, {}, {}, {}, 0, 0, 0, 0};

  const double start = f.clock;
  const double end = start + duration;

  auto blue_ensemble = [&] {
    std::vector<double> x;
    x.reserve(N * d);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.colour[i] == Colour::blue) x.insert(x.end(), f.coords.begin() + static_cast<long>(i * d),
                                                 f.coords.begin() + static_cast<long>((i + 1) * d));
    }
    return ParticleEnsemble(params.dim, std::move(x), f.clock);
  };
  auto observe = [&] {
    std::vector<double> blue, all;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = std::sqrt(norm2(f.coords, i, d));
      all.push_back(r);
      if (f.colour[i] == Colour::blue) blue.push_back(r);
    }
    DominationRecord rec;
    rec.time = f.clock;
    rec.blue = blue.size();
    rec.total = all.size();
    rec.violation = ordering_violation(count_profile(blue, N), count_profile(all, N));
    rec.holds = rec.violation == 0.0;
    run.records.push_back(rec);
    run.nbbm_snapshots.push_back({f.clock, blue_ensemble()});
    run.bbm_snapshots.push_back({f.clock, f.ensemble()});
  };

  auto rec = std::lower_bound(params.record_times.begin(), params.record_times.end(), start);
  const auto rec_end = std::upper_bound(params.record_times.begin(), params.record_times.end(), end);
  auto advance_to = [&](double until) {
    for (; rec != rec_end && *rec <= until; ++rec) {
      diffuse(f.coords, *rec - f.clock, rng);
      f.clock = *rec;
      observe();
    }
    diffuse(f.coords, until - f.clock, rng);
    f.clock = until;
  };
  advance_to(start);

  for (;;) {
    std::exponential_distribution<double> gap(static_cast<double>(f.size()));
    const double te = f.clock + gap(rng);
    if (te > end) break;
    advance_to(te);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!std::isfinite(norm2(f.coords, i, d))) throw SimulationError("nonfinite particle position", run.events);
    }
    std::uniform_int_distribution<std::size_t> pick(0, f.size() - 1);
    const std::size_t i = pick(rng);
    check_cap(f.size(), cap);
    split(f, i);
    violated.push_back(violated[i]);
    std::size_t reddened = f.size();
    if (f.colour[i] == Colour::blue) {
      ++run.blue_events;
      std::size_t far = f.size();
      double m = -1.0;
      for (std::size_t u = 0; u < f.size(); ++u) {
        if (f.colour[u] != Colour::blue) continue;
        const double s = norm2(f.coords, u, d);
        if (s > m) {
          m = s;
          far = u;
        }
      }
      f.colour[far] = Colour::red;
      reddened = far;
    }
    ++run.events;

    // Path criterion at this event time: |X_u| <= M^N for all checked times.
    double M2 = -1.0;
    std::size_t blue = 0;
    for (std::size_t u = 0; u < f.size(); ++u) {
      if (f.colour[u] == Colour::blue) {
        ++blue;
        M2 = std::max(M2, norm2(f.coords, u, d));
      }
    }
    if (blue != N) ++run.blue_count_errors;
    bool agree = true;
    for (std::size_t u = 0; u < f.size(); ++u) {
      // A particle sitting exactly on the new maximum leaves B(M) immediately after, almost surely.
      const double s = norm2(f.coords, u, d);
      if (s > M2 || (u == reddened && s >= M2)) violated[u] = 1;
      if ((violated[u] != 0) != (f.colour[u] == Colour::red)) agree = false;
    }
    if (!agree) ++run.contains_mismatches;
  }
  advance_to(end);
  run.nbbm = blue_ensemble();
  run.bbm = f;
  return run;
}

}  // namespace bbees
