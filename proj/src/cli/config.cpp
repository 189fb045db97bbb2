#include "bbees/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "bbees/core/errors.hpp"
#include "bbees/core/profile_io.hpp"

namespace bbees::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void mismatch(const std::string& name, const char* what, const std::string& text) {
  throw ConfigError(name + ": expected " + what + ", got '" + text + "'");
}

template <class T>
T parse_integer(const std::string& name, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) mismatch(name, "an integer", text);
  return v;
}

void parse(const std::string& name, const std::string& text, double& out) {
  const char* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || p != end || text.empty()) mismatch(name, "a number", text);
}
void parse(const std::string& name, const std::string& text, int& out) { out = parse_integer<int>(name, text); }
void parse(const std::string& name, const std::string& text, std::size_t& out) {
  if (!text.empty() && text[0] == '-') mismatch(name, "a nonnegative integer", text);
  out = parse_integer<std::size_t>(name, text);
}
void parse(const std::string& name, const std::string& text, bool& out) {
  if (text == "true") {
    out = true;
  } else if (text == "false") {
    out = false;
  } else {
    mismatch(name, "true or false", text);
  }
}
void parse(const std::string& name, const std::string& text, std::string& out) {
  if (text.find('\n') != std::string::npos) mismatch(name, "a single-line string", text);
  out = text;
}

std::string show(double v) { return format_double(v); }
std::string show(int v) { return std::to_string(v); }
std::string show(std::size_t v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(const std::string& v) { return v; }

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class S, class T>
Field field(const std::string& section, const std::string& key, S RunConfig::*sec, T S::*member) {
  const std::string name = section + "." + key;
  return {section, key, [sec, member](const RunConfig& c) { return show(c.*sec.*member); },
          [sec, member, name](RunConfig& c, const std::string& text) { parse(name, text, c.*sec.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    using C = RunConfig;
    std::vector<Field> v;
    v.push_back({"run", "seed", [](const C& c) { return std::to_string(c.run.seed); },
                 [](C& c, const std::string& s) { c.run.seed = parse_integer<std::uint64_t>("run.seed", s); }});
    v.push_back(field("run", "workers", &C::run, &RunSection::workers));
    v.push_back(field("run", "out", &C::run, &RunSection::out));

    v.push_back(field("simulate", "N", &C::simulate, &SimulateSection::N));
    v.push_back(field("simulate", "d", &C::simulate, &SimulateSection::d));
    v.push_back(field("simulate", "t", &C::simulate, &SimulateSection::t));
    v.push_back(field("simulate", "mode", &C::simulate, &SimulateSection::mode));
    v.push_back(field("simulate", "batch_dt", &C::simulate, &SimulateSection::batch_dt));
    v.push_back(field("simulate", "snapshot_dt", &C::simulate, &SimulateSection::snapshot_dt));
    v.push_back(field("simulate", "sampler", &C::simulate, &SimulateSection::sampler));
    v.push_back(field("simulate", "events", &C::simulate, &SimulateSection::events));

    v.push_back(field("solve", "d", &C::solve, &SolveSection::d));
    v.push_back(field("solve", "t", &C::solve, &SolveSection::t));
    v.push_back(field("solve", "delta", &C::solve, &SolveSection::delta));
    v.push_back(field("solve", "target_gap", &C::solve, &SolveSection::target_gap));
    v.push_back(field("solve", "initial", &C::solve, &SolveSection::initial));
    v.push_back(field("solve", "profile", &C::solve, &SolveSection::profile));
    v.push_back(field("solve", "spacing", &C::solve, &SolveSection::spacing));
    v.push_back(field("solve", "domain_cap", &C::solve, &SolveSection::domain_cap));
    v.push_back(field("solve", "refine", &C::solve, &SolveSection::refine));
    v.push_back(field("solve", "tolerance", &C::solve, &SolveSection::tolerance));

    v.push_back(field("stationary", "d", &C::stationary, &StationarySection::d));
    v.push_back(field("stationary", "spacing", &C::stationary, &StationarySection::spacing));

    v.push_back(field("hydro", "N", &C::hydro, &HydroSection::N));
    v.push_back(field("hydro", "d", &C::hydro, &HydroSection::d));
    v.push_back(field("hydro", "t", &C::hydro, &HydroSection::t));
    v.push_back(field("hydro", "replicas", &C::hydro, &HydroSection::replicas));
    v.push_back(field("hydro", "delta", &C::hydro, &HydroSection::delta));
    v.push_back(field("hydro", "sampler", &C::hydro, &HydroSection::sampler));
    v.push_back(field("hydro", "tolerance", &C::hydro, &HydroSection::tolerance));
    v.push_back(field("hydro", "allow_small_N", &C::hydro, &HydroSection::allow_small_N));

    v.push_back(field("boundary", "N", &C::boundary, &BoundarySection::N));
    v.push_back(field("boundary", "d", &C::boundary, &BoundarySection::d));
    v.push_back(field("boundary", "T", &C::boundary, &BoundarySection::T));
    v.push_back(field("boundary", "eta", &C::boundary, &BoundarySection::eta));
    v.push_back(field("boundary", "replicas", &C::boundary, &BoundarySection::replicas));
    v.push_back(field("boundary", "delta", &C::boundary, &BoundarySection::delta));
    v.push_back(field("boundary", "snapshot_dt", &C::boundary, &BoundarySection::snapshot_dt));
    v.push_back(field("boundary", "sampler", &C::boundary, &BoundarySection::sampler));
    v.push_back(field("boundary", "tolerance", &C::boundary, &BoundarySection::tolerance));

    v.push_back(field("selection", "N", &C::selection, &SelectionSection::N));
    v.push_back(field("selection", "d", &C::selection, &SelectionSection::d));
    v.push_back(field("selection", "t", &C::selection, &SelectionSection::t));
    v.push_back(field("selection", "K", &C::selection, &SelectionSection::K));
    v.push_back(field("selection", "c", &C::selection, &SelectionSection::c));
    v.push_back(field("selection", "replicas", &C::selection, &SelectionSection::replicas));
    v.push_back(field("selection", "snapshot_dt", &C::selection, &SelectionSection::snapshot_dt));
    v.push_back(field("selection", "sampler", &C::selection, &SelectionSection::sampler));
    v.push_back(field("selection", "profile_tolerance", &C::selection, &SelectionSection::profile_tolerance));
    v.push_back(field("selection", "radius_tolerance", &C::selection, &SelectionSection::radius_tolerance));
    v.push_back(field("selection", "mass_tolerance", &C::selection, &SelectionSection::mass_tolerance));
    v.push_back(field("selection", "required_fraction", &C::selection, &SelectionSection::required_fraction));

    v.push_back(field("stationarity", "N", &C::stationarity, &StationaritySection::N));
    v.push_back(field("stationarity", "d", &C::stationarity, &StationaritySection::d));
    v.push_back(field("stationarity", "burn_in", &C::stationarity, &StationaritySection::burn_in));
    v.push_back(field("stationarity", "window", &C::stationarity, &StationaritySection::window));
    v.push_back(field("stationarity", "n_windows", &C::stationarity, &StationaritySection::n_windows));
    v.push_back(field("stationarity", "replicas", &C::stationarity, &StationaritySection::replicas));
    v.push_back(field("stationarity", "snapshot_dt", &C::stationarity, &StationaritySection::snapshot_dt));
    v.push_back(field("stationarity", "sampler", &C::stationarity, &StationaritySection::sampler));
    v.push_back(field("stationarity", "tolerance", &C::stationarity, &StationaritySection::tolerance));

    v.push_back(field("kernel_dump", "d", &C::kernel_dump, &KernelDumpSection::d));
    v.push_back(field("kernel_dump", "t", &C::kernel_dump, &KernelDumpSection::t));
    v.push_back(field("kernel_dump", "y_max", &C::kernel_dump, &KernelDumpSection::y_max));
    v.push_back(field("kernel_dump", "r_max", &C::kernel_dump, &KernelDumpSection::r_max));
    v.push_back(field("kernel_dump", "points", &C::kernel_dump, &KernelDumpSection::points));
    v.push_back(field("kernel_dump", "tolerance", &C::kernel_dump, &KernelDumpSection::tolerance));
    return v;
  }();
  return f;
}

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s{"run",       "simulate",  "solve",        "stationary", "hydro",
                                          "boundary",  "selection", "stationarity", "kernel_dump"};
  return s;
}

const Field& find(const std::string& section, const std::string& key) {
  if (std::find(sections().begin(), sections().end(), section) == sections().end()) {
    throw ConfigError("unknown config section [" + section + "]");
  }
  for (const auto& f : fields()) {
    if (f.section == section && f.key == key) return f;
  }
  throw ConfigError("unknown config key '" + key + "' in section [" + section + "]");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_sampler(const std::string& name, const std::string& v) {
  require(v == "origin" || v == "uniform_ball" || v == "stationary",
          name + " must be origin, uniform_ball or stationary");
}

void check_dim(const std::string& s, int d) { require(d >= 1 && d <= 12, s + ".d must lie in 1..12"); }

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> c{"simulate", "solve",        "stationary", "hydro",
                                          "selection", "stationarity", "boundary",   "kernel-dump"};
  return c;
}

std::string section_of(const std::string& command) { return command == "kernel-dump" ? "kernel_dump" : command; }

std::vector<std::string> section_keys(const std::string& section) {
  std::vector<std::string> k;
  for (const auto& f : fields()) {
    if (f.section == section) k.push_back(f.key);
  }
  return k;
}

void set_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& text) {
  find(section, key).set(cfg, text);
}

std::string get_value(const RunConfig& cfg, const std::string& section, const std::string& key) {
  return find(section, key).get(cfg);
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where + "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (std::find(sections().begin(), sections().end(), section) == sections().end()) {
        throw ConfigError(where + "unknown config section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value, got '" + s + "'");
    if (section.empty()) throw ConfigError(where + "key outside of any [section]");
    try {
      set_value(base, section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str(), std::move(base));
}

std::string serialize_config(const RunConfig& cfg, const std::vector<std::string>& only) {
  std::string out;
  for (const auto& sec : sections()) {
    if (!only.empty() && std::find(only.begin(), only.end(), sec) == only.end()) continue;
    if (!out.empty()) out += '\n';
    out += "[" + sec + "]\n";
    for (const auto& f : fields()) {
      if (f.section == sec) out += f.key + " = " + f.get(cfg) + "\n";
    }
  }
  return out;
}

void validate(const RunConfig& c, const std::string& command) {
  require(c.run.workers >= 1, "run.workers must be >= 1");
  if (command == "simulate") {
    const auto& s = c.simulate;
    require(s.N >= 1, "simulate.N must be >= 1");
    check_dim("simulate", s.d);
    require(s.t >= 0.0, "simulate.t must be >= 0");
    require(s.mode == "exact" || s.mode == "frozen_batch", "simulate.mode must be exact or frozen_batch");
    require(s.batch_dt > 0.0, "simulate.batch_dt must be positive");
    require(s.snapshot_dt >= 0.0, "simulate.snapshot_dt must be >= 0");
    check_sampler("simulate.sampler", s.sampler);
  } else if (command == "solve") {
    const auto& s = c.solve;
    check_dim("solve", s.d);
    require(s.t > 0.0, "solve.t must be positive");
    require(s.delta > 0.0 || s.target_gap > 0.0, "solve.delta or solve.target_gap must be positive");
    require(s.delta >= 0.0 && s.target_gap >= 0.0, "solve.delta and solve.target_gap must be >= 0");
    if (s.profile.empty()) check_sampler("solve.initial", s.initial);
    require(s.spacing >= 0.0, "solve.spacing must be >= 0");
    require(s.domain_cap >= 0.0, "solve.domain_cap must be >= 0");
    require(s.refine >= 1, "solve.refine must be >= 1");
    require(s.tolerance > 0.0 && s.tolerance <= 1e-6, "solve.tolerance must lie in (0, 1e-6]");
  } else if (command == "stationary") {
    check_dim("stationary", c.stationary.d);
    require(c.stationary.spacing > 0.0, "stationary.spacing must be positive");
  } else if (command == "hydro") {
    const auto& s = c.hydro;
    require(s.N >= 1, "hydro.N must be >= 1");
    require(s.N >= 100 || s.allow_small_N, "hydro.N must be >= 100 unless hydro.allow_small_N = true");
    check_dim("hydro", s.d);
    require(s.t > 0.0, "hydro.t must be positive");
    require(s.replicas >= 1, "hydro.replicas must be >= 1");
    require(s.delta > 0.0, "hydro.delta must be positive");
    check_sampler("hydro.sampler", s.sampler);
  } else if (command == "boundary") {
    const auto& s = c.boundary;
    require(s.N >= 1, "boundary.N must be >= 1");
    check_dim("boundary", s.d);
    require(s.eta > 0.0 && s.eta < s.T, "boundary.eta must satisfy 0 < eta < T");
    require(s.replicas >= 1, "boundary.replicas must be >= 1");
    require(s.delta > 0.0, "boundary.delta must be positive");
    require(s.snapshot_dt > 0.0, "boundary.snapshot_dt must be positive");
    check_sampler("boundary.sampler", s.sampler);
  } else if (command == "selection") {
    const auto& s = c.selection;
    require(s.N >= 1, "selection.N must be >= 1");
    check_dim("selection", s.d);
    require(s.t > 0.0, "selection.t must be positive");
    require(s.K > 0.0, "selection.K must be positive");
    require(s.c > 0.0 && s.c <= 1.0, "selection.c must lie in (0, 1]");
    require(s.replicas >= 1, "selection.replicas must be >= 1");
    require(s.snapshot_dt > 0.0, "selection.snapshot_dt must be positive");
    require(s.required_fraction > 0.0 && s.required_fraction <= 1.0,
            "selection.required_fraction must lie in (0, 1]");
    check_sampler("selection.sampler", s.sampler);
  } else if (command == "stationarity") {
    const auto& s = c.stationarity;
    require(s.N >= 1, "stationarity.N must be >= 1");
    check_dim("stationarity", s.d);
    require(s.burn_in > 0.0, "stationarity.burn_in must be positive");
    require(s.window > 0.0, "stationarity.window must be positive");
    require(s.n_windows >= 1, "stationarity.n_windows must be >= 1");
    require(s.replicas >= 1, "stationarity.replicas must be >= 1");
    require(s.snapshot_dt > 0.0 && s.snapshot_dt <= s.window, "stationarity.snapshot_dt must lie in (0, window]");
    check_sampler("stationarity.sampler", s.sampler);
  } else if (command == "kernel-dump") {
    const auto& s = c.kernel_dump;
    check_dim("kernel_dump", s.d);
    require(s.t > 0.0, "kernel_dump.t must be positive");
    require(s.y_max >= 0.0, "kernel_dump.y_max must be >= 0");
    require(s.r_max > 0.0, "kernel_dump.r_max must be positive");
    require(s.points >= 2, "kernel_dump.points must be >= 2");
    require(s.tolerance > 0.0 && s.tolerance <= 1e-6, "kernel_dump.tolerance must lie in (0, 1e-6]");
  } else {
    throw ConfigError("unknown subcommand '" + command + "'");
  }
}

}  // namespace bbees::cli
