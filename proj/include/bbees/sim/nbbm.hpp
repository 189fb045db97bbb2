#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbees/core/particle_ensemble.hpp"
#include "bbees/sim/rng.hpp"

namespace bbees {

enum class SimMode { exact, frozen_batch };

struct SimParams {
  int dim = 1;
  std::size_t population = 100;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::exact;
  double batch_dt = 0.01;             // window length in frozen-batch mode
  std::vector<double> record_times;   // absolute clock times, strictly increasing

  /// Throws ConfigError on N < 1, dim < 1, bad batch_dt or an unordered schedule.
  void validate() const;
};

/// One branching event; labels are 1-based.
struct BranchEvent {
  double time = 0.0;
  std::size_t branching_label = 0;
  std::size_t removed_label = 0;
};

struct Snapshot {
  double time = 0.0;
  ParticleEnsemble ensemble;
};

struct NbbmRun {
  ParticleEnsemble state;
  std::vector<BranchEvent> events;
  std::vector<Snapshot> snapshots;  // one per record time in [clock, clock + duration]
};

/// Evolves the N-BBM for `duration`. In exact mode every particle diffuses
/// between consecutive Exp(N) event times; at an event a uniformly chosen
/// particle k branches and the particle furthest from the origin (lowest
/// index on ties) jumps to X_k. Throws SimulationError on nonfinite positions.
NbbmRun advance_nbbm(const SimParams& params, const ParticleEnsemble& state, double duration, Rng& rng);

/// Adds independent N(0, 2 dt) increments to every coordinate.
void diffuse(std::vector<double>& coords, double dt, Rng& rng);

}  // namespace bbees
