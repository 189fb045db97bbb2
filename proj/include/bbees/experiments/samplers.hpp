#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "bbees/core/particle_ensemble.hpp"
#include "bbees/obstacle/solver.hpp"
#include "bbees/sim/rng.hpp"

namespace bbees {

enum class SamplerKind { origin, uniform_ball, stationary };

/// I.i.d. initial positions together with the radial CDF of their law.
struct InitialSampler {
  SamplerKind kind = SamplerKind::uniform_ball;
  int dim = 1;

  ParticleEnsemble sample(std::size_t N, Rng& rng) const;
  /// Sets the initial data of a solve to v0(r) = mu0(B(r)). The point mass at
  /// the origin is replaced by a unit step at radius 1e-9.
  void set_initial(SolveRequest& req) const;
};

SamplerKind parse_sampler_kind(const std::string& name);
std::string to_string(SamplerKind kind);

/// A uniformly distributed unit vector in R^d, written to out[0..d).
void random_direction(int d, Rng& rng, double* out);

}  // namespace bbees
