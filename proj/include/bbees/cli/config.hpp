#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bbees::cli {

struct RunSection {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;  // empty: $BBEES_OUTPUT_ROOT/<command> or ./bbees-out/<command>
  bool operator==(const RunSection&) const = default;
};

struct SimulateSection {
  std::size_t N = 100;
  int d = 1;
  double t = 1.0;
  std::string mode = "exact";  // exact | frozen_batch
  double batch_dt = 0.01;
  double snapshot_dt = 0.1;    // 0 disables snapshots
  std::string sampler = "origin";
  bool events = true;
  bool operator==(const SimulateSection&) const = default;
};

struct SolveSection {
  int d = 1;
  double t = 1.0;
  double delta = 0.01;
  double target_gap = 0.0;
  std::string initial = "stationary";  // origin | uniform_ball | stationary
  std::string profile;                 // CSV path; overrides `initial` when set
  double spacing = 0.0;
  double domain_cap = 0.0;
  int refine = 8;
  double tolerance = 1e-10;
  bool operator==(const SolveSection&) const = default;
};

struct StationarySection {
  int d = 1;
  double spacing = 1e-3;
  bool operator==(const StationarySection&) const = default;
};

struct HydroSection {
  std::size_t N = 2000;
  int d = 1;
  double t = 1.0;
  std::size_t replicas = 10;
  double delta = 0.01;
  std::string sampler = "uniform_ball";
  double tolerance = 0.05;
  bool allow_small_N = false;
  bool operator==(const HydroSection&) const = default;
};

struct BoundarySection {
  std::size_t N = 5000;
  int d = 1;
  double T = 2.0;
  double eta = 0.2;
  std::size_t replicas = 10;
  double delta = 0.01;
  double snapshot_dt = 0.05;
  std::string sampler = "uniform_ball";
  double tolerance = 0.1;
  bool operator==(const BoundarySection&) const = default;
};

struct SelectionSection {
  std::size_t N = 2000;
  int d = 1;
  double t = 15.0;
  double K = 1.0;
  double c = 1.0;
  std::size_t replicas = 10;
  double snapshot_dt = 0.05;
  std::string sampler = "origin";
  double profile_tolerance = 0.07;
  double radius_tolerance = 0.15;
  double mass_tolerance = 0.05;
  double required_fraction = 0.9;
  bool operator==(const SelectionSection&) const = default;
};

struct StationaritySection {
  std::size_t N = 1000;
  int d = 1;
  double burn_in = 20.0;
  double window = 5.0;
  std::size_t n_windows = 4;
  std::size_t replicas = 2;
  double snapshot_dt = 0.05;
  std::string sampler = "origin";
  double tolerance = 0.05;
  bool operator==(const StationaritySection&) const = default;
};

struct KernelDumpSection {
  int d = 1;
  double t = 1.0;
  double y_max = 3.0;
  double r_max = 5.0;
  std::size_t points = 21;
  double tolerance = 1e-10;
  bool operator==(const KernelDumpSection&) const = default;
};

/// Every parameter of every subcommand, with documented defaults.
struct RunConfig {
  RunSection run;
  SimulateSection simulate;
  SolveSection solve;
  StationarySection stationary;
  HydroSection hydro;
  BoundarySection boundary;
  SelectionSection selection;
  StationaritySection stationarity;
  KernelDumpSection kernel_dump;
  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& subcommands();
/// Config section used by a subcommand ("kernel-dump" -> "kernel_dump").
std::string section_of(const std::string& command);

/// Keys of one section in serialization order.
std::vector<std::string> section_keys(const std::string& section);

/// Sets section.key from text; throws ConfigError on unknown keys or type mismatch.
void set_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& text);
std::string get_value(const RunConfig& cfg, const std::string& section, const std::string& key);

/// Line-oriented `[section]` / `key = value` text; '#' and ';' start comments.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
/// All sections, or only `sections` when given. Doubles use 17 significant digits.
std::string serialize_config(const RunConfig& cfg, const std::vector<std::string>& sections = {});

/// Constraint checks for one subcommand; throws ConfigError naming the parameter.
void validate(const RunConfig& cfg, const std::string& command);

}  // namespace bbees::cli
