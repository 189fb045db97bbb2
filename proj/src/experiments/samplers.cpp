#include "bbees/experiments/samplers.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "bbees/core/errors.hpp"
#include "bbees/obstacle/stationary.hpp"

namespace bbees {

namespace {

std::shared_ptr<const StationaryState> cached_state(int d) {
  static std::mutex m;
  static std::map<int, std::shared_ptr<const StationaryState>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[d];
  if (!slot) slot = std::make_shared<const StationaryState>(d);
  return slot;
}

}  // namespace

void random_direction(int d, Rng& rng, double* out) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      out[c] = n(rng);
      s += out[c] * out[c];
    }
    if (s > 0.0) {
      const double k = 1.0 / std::sqrt(s);
      for (int c = 0; c < d; ++c) out[c] *= k;
      return;
    }
  }
}

ParticleEnsemble InitialSampler::sample(std::size_t N, Rng& rng) const {
  if (kind == SamplerKind::origin) return ParticleEnsemble::at_origin(dim, N);
  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> x(N * d);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::shared_ptr<const StationaryState> s;
  if (kind == SamplerKind::stationary) s = cached_state(dim);
  for (std::size_t k = 0; k < N; ++k) {
    const double r = kind == SamplerKind::uniform_ball ? std::pow(u(rng), 1.0 / dim) : s->V_inverse(u(rng));
    random_direction(dim, rng, &x[k * d]);
    for (std::size_t c = 0; c < d; ++c) x[k * d + c] *= r;
  }
  return ParticleEnsemble(dim, std::move(x));
}

void InitialSampler::set_initial(SolveRequest& req) const {
  req.continuous = {};
  switch (kind) {
    case SamplerKind::origin:
      req.initial = RadialProfile::step(1e-9, 1.0, 1.0);
      break;
    case SamplerKind::uniform_ball: {
      const double d = dim;
      req.continuous = {[d](double r) { return r >= 1.0 ? 1.0 : std::pow(r, d); }, 1.0};
      break;
    }
    case SamplerKind::stationary: {
      auto s = cached_state(dim);
      req.continuous = {[s](double r) { return s->V(r); }, s->r_infinity()};
      break;
    }
  }
}

SamplerKind parse_sampler_kind(const std::string& name) {
  if (name == "origin") return SamplerKind::origin;
  if (name == "uniform_ball") return SamplerKind::uniform_ball;
  if (name == "stationary") return SamplerKind::stationary;
  throw ConfigError("unknown sampler '" + name + "' (expected origin, uniform_ball or stationary)");
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::origin:
      return "origin";
    case SamplerKind::uniform_ball:
      return "uniform_ball";
    case SamplerKind::stationary:
      return "stationary";
  }
  return "uniform_ball";
}

}  // namespace bbees
