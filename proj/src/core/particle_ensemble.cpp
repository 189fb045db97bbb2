#include "bbees/core/particle_ensemble.hpp"

#include <cmath>
#include <string>

#include "bbees/core/errors.hpp"

namespace bbees {

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

ParticleEnsemble::ParticleEnsemble(int dim, std::vector<double> coordinates, double clock)
    : dim_(dim), coords_(std::move(coordinates)), clock_(clock) {
  if (dim_ < 1) throw DomainError("ParticleEnsemble: dimension must be >= 1");
  if (coords_.empty() || coords_.size() % static_cast<std::size_t>(dim_) != 0) {
    throw DomainError("ParticleEnsemble: coordinate count " + std::to_string(coords_.size()) +
                      " is not a positive multiple of dim " + std::to_string(dim_));
  }
  if (!(clock_ >= 0.0) || !std::isfinite(clock_)) throw DomainError("ParticleEnsemble: clock must be finite and >= 0");
  for (double v : coords_) {
    if (!std::isfinite(v)) throw DomainError("ParticleEnsemble: nonfinite coordinate");
  }
}

ParticleEnsemble ParticleEnsemble::at_origin(int dim, std::size_t population, double clock) {
  if (dim < 1) throw DomainError("ParticleEnsemble: dimension must be >= 1");
  return ParticleEnsemble(dim, std::vector<double>(population * static_cast<std::size_t>(dim), 0.0), clock);
}

std::span<const double> ParticleEnsemble::position(std::size_t k) const {
  const auto d = static_cast<std::size_t>(dim_);
  return std::span<const double>(coords_).subspan(k * d, d);
}

double ParticleEnsemble::norm(std::size_t k) const { return euclidean_norm(position(k)); }

std::vector<double> ParticleEnsemble::norms() const {
  std::vector<double> out(population());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = norm(k);
  return out;
}

}  // namespace bbees
