#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bbees/core/particle_ensemble.hpp"
#include "bbees/sim/nbbm.hpp"
#include "bbees/sim/rng.hpp"

namespace bbees {

/// Ulam-Harris label: an initial index followed by a path of 1s and 2s.
struct UlamLabel {
  std::uint32_t root = 1;
  std::string path;  // characters '1' and '2'

  UlamLabel child(int which) const { return {root, path + static_cast<char>('0' + which)}; }
  bool is_ancestor_of(const UlamLabel& other) const;
  /// Dotted form, e.g. "7.2.1".
  std::string to_string() const;
  auto operator<=>(const UlamLabel&) const = default;
};

enum class Colour : std::uint8_t { blue, red };

struct BbmForest {
  int dim = 1;
  double clock = 0.0;
  std::vector<UlamLabel> labels;
  std::vector<double> coords;   // particle i at [i*dim, (i+1)*dim)
  std::vector<Colour> colour;   // empty unless a coupling is active

  static BbmForest from_ensemble(const ParticleEnsemble& e);
  std::size_t size() const { return labels.size(); }
  ParticleEnsemble ensemble() const;
};

inline constexpr std::size_t kDefaultPopulationCap = 10'000'000;

/// Free binary BBM: each particle branches at rate 1 into children u.1 (which
/// keeps the parent's slot) and u.2 (appended). Throws ResourceError above `cap`.
BbmForest advance_bbm(const BbmForest& forest, double duration, Rng& rng,
                      std::size_t cap = kDefaultPopulationCap);

struct DominationRecord {
  double time = 0.0;
  double violation = 0.0;  // sup_r (F^N - C_1 F^+), 0 when domination holds
  bool holds = true;
  std::size_t blue = 0;
  std::size_t total = 0;
};

struct CoupledRun {
  ParticleEnsemble nbbm;  // blue particles at the end
  BbmForest bbm;          // whole forest at the end, coloured
  std::vector<DominationRecord> records;  // one per record time in (clock, clock + duration]
  std::vector<Snapshot> nbbm_snapshots;
  std::vector<Snapshot> bbm_snapshots;
  std::size_t events = 0;
  std::size_t blue_events = 0;
  std::size_t blue_count_errors = 0;   // event times with #blue != N
  std::size_t contains_mismatches = 0; // event times where the path criterion disagrees with the colours
};

/// Standard coupling of the N-BBM (blue particles) with a BBM started from the
/// same configuration. params.record_times selects the observation times.
CoupledRun coupled_run(const SimParams& params, const ParticleEnsemble& initial, double duration, Rng& rng,
                       std::size_t cap = kDefaultPopulationCap);

}  // namespace bbees
