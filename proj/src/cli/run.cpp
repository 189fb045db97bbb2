#include "bbees/cli/run.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bbees/core/errors.hpp"
#include "bbees/core/profile_io.hpp"
#include "bbees/experiments/experiments.hpp"
#include "bbees/kernel/radial_kernel.hpp"
#include "bbees/obstacle/solver.hpp"
#include "bbees/obstacle/stationary.hpp"
#include "bbees/sim/nbbm.hpp"

namespace bbees::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

ArtifactSet::ArtifactSet(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

void ArtifactSet::add(const std::string& name, const std::string& content) {
  write_atomic(root_ / name, content);
  items_.push_back({name, sha256_hex(content), content.size()});
}

std::string ArtifactSet::write_manifest(const std::string& command) const {
  ojson m;
  m["command"] = command;
  m["artifacts"] = ojson::array();
  for (const auto& a : items_) m["artifacts"].push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  const std::string text = m.dump(2) + "\n";
  write_atomic(root_ / "manifest.json", text);
  return sha256_hex(text);
}

fs::path resolve_output_root(const RunConfig& cfg, const std::string& command) {
  if (!cfg.run.out.empty()) return cfg.run.out;
  if (const char* env = std::getenv("BBEES_OUTPUT_ROOT"); env && *env) return fs::path(env) / command;
  return fs::path("bbees-out") / command;
}

std::string artifact_config(const RunConfig& cfg, const std::string& command) {
  return "[run]\nseed = " + std::to_string(cfg.run.seed) + "\n\n" + serialize_config(cfg, {section_of(command)});
}

std::string error_record(const std::string& kind, const std::string& message) {
  return ojson{{"error", {{"kind", kind}, {"message", message}}}}.dump();
}

namespace {

std::string num(double x) { return format_double(x); }

// 0, dt, 2 dt, ... up to t, with t itself always included.
std::vector<double> schedule(double t, double dt) {
  std::vector<double> out{0.0};
  if (dt <= 0.0) {
    if (t > 0.0) out.push_back(t);
    return out;
  }
  for (std::size_t k = 1;; ++k) {
    const double s = static_cast<double>(k) * dt;
    if (s >= t - 1e-12 * std::max(1.0, t)) break;
    out.push_back(s);
  }
  if (t > 0.0) out.push_back(t);
  return out;
}

std::string coord_header(int d) {
  std::string h;
  for (int c = 1; c <= d; ++c) h += ",x" + std::to_string(c);
  return h;
}

void ensemble_rows(std::ostringstream& out, const ParticleEnsemble& e, const double* time) {
  for (std::size_t k = 0; k < e.population(); ++k) {
    if (time) out << num(*time) << ',';
    out << k + 1;
    for (double x : e.position(k)) out << ',' << num(x);
    out << '\n';
  }
}

std::string profile_csv(const RadialProfile& f) {
  std::ostringstream s;
  write_profile_csv(s, f);
  return s.str();
}

int run_simulate(const RunConfig& cfg, ArtifactSet& art, std::ostream& log) {
  const auto& s = cfg.simulate;
  SimParams p;
  p.dim = s.d;
  p.population = s.N;
  p.seed = cfg.run.seed;
  p.mode = s.mode == "exact" ? SimMode::exact : SimMode::frozen_batch;
  p.batch_dt = s.batch_dt;
  p.record_times = schedule(s.t, s.snapshot_dt);
  p.validate();

  Rng rng = make_stream(cfg.run.seed, 0);
  const InitialSampler sampler{parse_sampler_kind(s.sampler), s.d};
  const auto x0 = sampler.kind == SamplerKind::origin ? ParticleEnsemble::at_origin(s.d, s.N) : sampler.sample(s.N, rng);
  const auto res = advance_nbbm(p, x0, s.t, rng);

  std::ostringstream fin;
  fin << "label" << coord_header(s.d) << '\n';
  ensemble_rows(fin, res.state, nullptr);
  art.add("final.csv", fin.str());

  std::ostringstream snaps;
  snaps << "time,label" << coord_header(s.d) << '\n';
  for (const auto& sn : res.snapshots) ensemble_rows(snaps, sn.ensemble, &sn.time);
  art.add("snapshots.csv", snaps.str());

  if (s.events) {
    std::ostringstream ev;
    ev << "time,branching_label,removed_label\n";
    for (const auto& e : res.events) ev << num(e.time) << ',' << e.branching_label << ',' << e.removed_label << '\n';
    art.add("events.csv", ev.str());
  }

  const auto norms = res.state.norms();
  ojson j;
  j["N"] = s.N;
  j["d"] = s.d;
  j["t"] = s.t;
  j["mode"] = s.mode;
  j["seed"] = cfg.run.seed;
  j["events"] = res.events.size();
  j["snapshots"] = res.snapshots.size();
  j["max_norm"] = *std::max_element(norms.begin(), norms.end());
  art.add("summary.json", j.dump(2) + "\n");
  log << "simulate: " << res.events.size() << " events, max norm " << num(j["max_norm"].get<double>()) << '\n';
  return 0;
}

ojson interval_json(const BoundaryInterval& b) { return ojson::array({b.lo, b.hi}); }

int run_solve(const RunConfig& cfg, ArtifactSet& art, std::ostream& log) {
  const auto& s = cfg.solve;
  SolveRequest req;
  req.ctx = KernelContext(s.d, s.tolerance);
  req.horizon = s.t;
  req.step_size = s.delta;
  req.target_gap = s.target_gap;
  req.grid.spacing = s.spacing;
  req.grid.domain_cap = s.domain_cap;
  req.grid.refine = s.refine;
  req.grid.workers = cfg.run.workers;
  if (!s.profile.empty()) {
    const fs::path p(s.profile);
    if (p.extension() == ".json") {
      std::ifstream f(p);
      if (!f) throw ConfigError("solve.profile: cannot open '" + s.profile + "'");
      std::ostringstream text;
      text << f.rdbuf();
      req.initial = profile_from_json(text.str());
    } else {
      req.initial = read_profile_csv_file(s.profile);
    }
  } else {
    InitialSampler{parse_sampler_kind(s.initial), s.d}.set_initial(req);
  }
  req.validate();

  const auto pair = solve_sandwich(req);
  const auto interval = free_boundary_radius(pair);
  art.add("lower.csv", profile_csv(pair.lower));
  art.add("upper.csv", profile_csv(pair.upper));

  ojson j;
  j["d"] = s.d;
  j["t"] = s.t;
  j["delta"] = pair.step_size;
  j["steps"] = pair.steps_taken;
  j["analytic_gap"] = pair.analytic_gap;
  j["grid_gap"] = pair.grid_gap;
  j["measured_gap"] = pair.measured_gap();
  j["boundary_interval"] = interval_json(interval);
  j["grid_limited"] = pair.grid_limited();
  art.add("summary.json", j.dump(2) + "\n");
  log << "solve: boundary interval [" << num(interval.lo) << ", " << num(interval.hi) << "], gap "
      << num(pair.measured_gap()) << '\n';
  return 0;
}

int run_stationary(const RunConfig& cfg, ArtifactSet& art, std::ostream& log) {
  const auto& s = cfg.stationary;
  const StationaryState st(s.d);
  const double R = st.r_infinity();
  const auto n = static_cast<std::size_t>(std::ceil(R / s.spacing));
  std::ostringstream v;
  v << "r,V,U\n";
  double residual = 0.0;
  std::vector<double> x(static_cast<std::size_t>(s.d), 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = std::min(R, static_cast<double>(i) * s.spacing);
    v << num(r) << ',' << num(st.V(r)) << ',' << num(st.U_radial(r)) << '\n';
  }
  for (int i = 1; i < 10; ++i) {
    x[0] = R * i / 10.0;
    residual = std::max(residual, st.eigen_residual(x));
  }
  art.add("V.csv", v.str());
  ojson j;
  j["d"] = s.d;
  j["r_infinity"] = R;
  j["normalizer"] = st.normalizer();
  j["total_mass"] = st.total_mass();
  j["eigen_residual_max"] = residual;
  art.add("summary.json", j.dump(2) + "\n");
  log << "stationary: R_inf " << num(R) << '\n';
  return 0;
}

int run_kernel_dump(const RunConfig& cfg, ArtifactSet& art, std::ostream& log) {
  const auto& s = cfg.kernel_dump;
  const KernelContext ctx(s.d, s.tolerance);
  std::ostringstream out;
  out << "d,y,r,t,w,g,G\n";
  const double m = static_cast<double>(s.points - 1);
  for (std::size_t i = 0; i < s.points; ++i) {
    const double y = s.y_max * static_cast<double>(i) / m;
    for (std::size_t k = 1; k < s.points; ++k) {
      const double r = s.r_max * static_cast<double>(k) / m;
      const auto kv = kernel_values(ctx, y, r, s.t);
      out << s.d << ',' << num(y) << ',' << num(r) << ',' << num(s.t) << ',' << num(kv.w) << ',' << num(kv.g) << ','
          << num(kv.G) << '\n';
    }
  }
  art.add("kernel.csv", out.str());
  log << "kernel-dump: " << s.points * (s.points - 1) << " rows\n";
  return 0;
}

ExperimentBase base_of(const RunConfig& cfg, std::size_t N, int d, std::size_t replicas, double delta,
                       double snapshot_dt, const std::string& sampler) {
  ExperimentBase b;
  b.N = N;
  b.dim = d;
  b.replicas = replicas;
  b.seed = cfg.run.seed;
  b.workers = cfg.run.workers;
  b.step_size = delta;
  b.snapshot_dt = snapshot_dt;
  b.sampler = parse_sampler_kind(sampler);
  return b;
}

int run_experiment(const std::string& command, const RunConfig& cfg, ArtifactSet& art, std::ostream& log) {
  std::vector<ReportRow> rows;
  if (command == "hydro") {
    const auto& s = cfg.hydro;
    HydroConfig c;
    c.base = base_of(cfg, s.N, s.d, s.replicas, s.delta, c.base.snapshot_dt, s.sampler);
    c.t = s.t;
    c.tolerance = s.tolerance;
    c.allow_small_N = s.allow_small_N;
    rows = hydrodynamic_report(c);
  } else if (command == "boundary") {
    const auto& s = cfg.boundary;
    BoundaryConfig c;
    c.base = base_of(cfg, s.N, s.d, s.replicas, s.delta, s.snapshot_dt, s.sampler);
    c.T = s.T;
    c.eta = s.eta;
    c.tolerance = s.tolerance;
    rows = boundary_report(c);
  } else if (command == "selection") {
    const auto& s = cfg.selection;
    SelectionConfig c;
    c.base = base_of(cfg, s.N, s.d, s.replicas, c.base.step_size, s.snapshot_dt, s.sampler);
    c.t = s.t;
    c.K = s.K;
    c.c = s.c;
    c.profile_tolerance = s.profile_tolerance;
    c.radius_tolerance = s.radius_tolerance;
    c.mass_tolerance = s.mass_tolerance;
    c.required_fraction = s.required_fraction;
    rows = selection_report(c);
  } else {
    const auto& s = cfg.stationarity;
    StationarityConfig c;
    c.base = base_of(cfg, s.N, s.d, s.replicas, c.base.step_size, s.snapshot_dt, s.sampler);
    c.burn_in = s.burn_in;
    c.window = s.window;
    c.n_windows = s.n_windows;
    c.tolerance = s.tolerance;
    rows = stationarity_report(c);
  }
  art.add("report.csv", report_csv(rows));
  art.add("summary.json", report_summary_json(command, rows) + "\n");
  for (const auto& r : rows) {
    log << command << ": " << r.statistic << " = " << num(r.value) << (r.pass() ? "" : "  FAIL") << '\n';
  }
  return all_pass(rows) ? 0 : 1;
}

}  // namespace

RunResult run(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  validate(cfg, command);
  RunResult res;
  res.root = resolve_output_root(cfg, command);
  ArtifactSet art(res.root);
  art.add("config.ini", artifact_config(cfg, command));
  if (command == "simulate") {
    res.exit_code = run_simulate(cfg, art, log);
  } else if (command == "solve") {
    res.exit_code = run_solve(cfg, art, log);
  } else if (command == "stationary") {
    res.exit_code = run_stationary(cfg, art, log);
  } else if (command == "kernel-dump") {
    res.exit_code = run_kernel_dump(cfg, art, log);
  } else {
    res.exit_code = run_experiment(command, cfg, art, log);
  }
  res.manifest_sha256 = art.write_manifest(command);
  return res;
}

}  // namespace bbees::cli
