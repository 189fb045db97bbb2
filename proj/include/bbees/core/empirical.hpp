#pragma once

#include <functional>
#include <span>

#include "bbees/core/particle_ensemble.hpp"
#include "bbees/core/radial_profile.hpp"

namespace bbees {

/// F(r) = (1/N) #{k : |X_k| < r}. The domain cap is max norm + 1.
RadialProfile empirical_cdf(const ParticleEnsemble& ensemble);
/// Same, from a list of norms.
RadialProfile empirical_cdf_of_norms(std::span<const double> norms, double domain_cap = 0.0);

double max_radius(const ParticleEnsemble& ensemble);

/// True iff at least a fraction c of the particles lies in the open ball B(K).
bool in_gamma(const ParticleEnsemble& ensemble, double K, double c);

using PointPredicate = std::function<bool(std::span<const double>)>;

/// Fraction of particles satisfying the predicate.
double measure_of_set(const ParticleEnsemble& ensemble, const PointPredicate& indicator);

}  // namespace bbees
