#include "bbees/core/empirical.hpp"

#include <algorithm>
#include <vector>

#include "bbees/core/errors.hpp"

namespace bbees {

RadialProfile empirical_cdf_of_norms(std::span<const double> norms, double domain_cap) {
  std::vector<double> r(norms.begin(), norms.end());
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  std::vector<RadialProfile::Jump> jumps;
  for (std::size_t i = 0; i < r.size(); ++i) {
    // Count of norms <= r[i] becomes the value just after r[i].
    if (i + 1 < r.size() && r[i + 1] == r[i]) continue;
    jumps.push_back({r[i], static_cast<double>(i + 1) / n});
  }
  if (!jumps.empty()) jumps.back().value = 1.0;
  if (domain_cap <= 0.0) domain_cap = RadialProfile::default_cap(jumps);
  return RadialProfile(std::move(jumps), domain_cap);
}

RadialProfile empirical_cdf(const ParticleEnsemble& ensemble) {
  const auto norms = ensemble.norms();
  return empirical_cdf_of_norms(norms);
}

double max_radius(const ParticleEnsemble& ensemble) {
  double m = 0.0;
  for (std::size_t k = 0; k < ensemble.population(); ++k) m = std::max(m, ensemble.norm(k));
  return m;
}

bool in_gamma(const ParticleEnsemble& ensemble, double K, double c) {
  if (!(K > 0.0)) throw DomainError("in_gamma: K must be positive");
  std::size_t inside = 0;
  for (std::size_t k = 0; k < ensemble.population(); ++k) inside += ensemble.norm(k) < K ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(ensemble.population()) >= c;
}

double measure_of_set(const ParticleEnsemble& ensemble, const PointPredicate& indicator) {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ensemble.population(); ++k) hits += indicator(ensemble.position(k)) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(ensemble.population());
}

}  // namespace bbees
