#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bbees {

/// Positions of N labelled particles in R^d together with the simulation clock.
///
/// Particle k (0-based here, 1-based in serialized output) occupies
/// coordinates [k*dim, (k+1)*dim) of the flat coordinate array. The value is
/// immutable: evolution operations return new ensembles.
class ParticleEnsemble {
 public:
  ParticleEnsemble(int dim, std::vector<double> coordinates, double clock = 0.0);

  static ParticleEnsemble at_origin(int dim, std::size_t population, double clock = 0.0);

  int dim() const noexcept { return dim_; }
  std::size_t population() const noexcept { return coords_.size() / static_cast<std::size_t>(dim_); }
  double clock() const noexcept { return clock_; }

  std::span<const double> coordinates() const noexcept { return coords_; }
  std::span<const double> position(std::size_t k) const;

  /// Euclidean norm of particle k.
  double norm(std::size_t k) const;
  std::vector<double> norms() const;

  bool operator==(const ParticleEnsemble&) const = default;

 private:
  int dim_;
  std::vector<double> coords_;
  double clock_;
};

double euclidean_norm(std::span<const double> x);

}  // namespace bbees
