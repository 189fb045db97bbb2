#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bbees/cli/config.hpp"
#include "bbees/cli/run.hpp"
#include "bbees/core/errors.hpp"

using namespace bbees;
using namespace bbees::cli;
namespace fs = std::filesystem;

namespace {

RunConfig random_config(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 3);
  auto pos = [&](double scale) { return scale * (0.01 + u(g)); };
  auto count = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(g); };
  auto pick = [&](std::initializer_list<const char*> xs) {
    return std::string(*(xs.begin() + std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(g)));
  };
  auto samplers = [&] { return pick({"origin", "uniform_ball", "stationary"}); };

  RunConfig c;
  c.run.seed = g();
  c.run.workers = static_cast<int>(count(1, 8));
  c.run.out = "out dir/" + std::to_string(count(0, 99));

  c.simulate = {count(1, 5000), dim(g), pos(10), pick({"exact", "frozen_batch"}), pos(0.1), pos(1), samplers(),
                u(g) < 0.5};
  c.solve = {dim(g), pos(5), pos(0.05), u(g) < 0.5 ? 0.0 : pos(0.1), samplers(), "", pos(0.01), 0.0,
             static_cast<int>(count(1, 16)), 1e-12 + 1e-7 * u(g)};
  c.stationary = {dim(g), pos(0.01)};
  c.hydro = {count(100, 5000), dim(g), pos(3), count(1, 20), pos(0.05), samplers(), pos(0.1), u(g) < 0.5};
  c.boundary.N = count(1, 5000);
  c.boundary.d = dim(g);
  c.boundary.T = 1.0 + pos(3);
  c.boundary.eta = u(g) * 0.9;
  c.boundary.replicas = count(1, 20);
  c.boundary.delta = pos(0.05);
  c.boundary.snapshot_dt = pos(0.1);
  c.boundary.sampler = samplers();
  c.boundary.tolerance = u(g);
  c.selection.N = count(1, 5000);
  c.selection.d = dim(g);
  c.selection.t = pos(20);
  c.selection.K = pos(3);
  c.selection.c = pos(0.9);
  c.selection.replicas = count(1, 20);
  c.selection.snapshot_dt = pos(0.1);
  c.selection.sampler = samplers();
  c.selection.profile_tolerance = u(g);
  c.selection.radius_tolerance = u(g);
  c.selection.mass_tolerance = u(g);
  c.selection.required_fraction = pos(0.9);
  c.stationarity.N = count(1, 5000);
  c.stationarity.d = dim(g);
  c.stationarity.burn_in = pos(30);
  c.stationarity.window = 1.0 + pos(5);
  c.stationarity.n_windows = count(1, 8);
  c.stationarity.replicas = count(1, 4);
  c.stationarity.snapshot_dt = pos(0.1);
  c.stationarity.sampler = samplers();
  c.stationarity.tolerance = u(g);
  c.kernel_dump = {dim(g), pos(4), pos(5), pos(8), count(2, 50), 1e-12 + 1e-7 * u(g)};
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bbees_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config round trip on random valid configs") {
  std::mt19937_64 g(2024);
  for (int i = 0; i < 100; ++i) {
    const auto c = random_config(g);
    for (const auto& cmd : subcommands()) CHECK_NOTHROW(validate(c, cmd));
    const auto text = serialize_config(c);
    CHECK(parse_config(text) == c);
  }
}

TEST_CASE("default config is valid for every subcommand") {
  for (const auto& cmd : subcommands()) CHECK_NOTHROW(validate(RunConfig{}, cmd));
  CHECK(parse_config("") == RunConfig{});
  CHECK(parse_config("# nothing\n\n; here\n") == RunConfig{});
}

TEST_CASE("config errors name the offending parameter") {
  auto message = [](auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const auto zero_n = parse_config("[simulate]\nN = 0\n");
  CHECK(message([&] { validate(zero_n, "simulate"); }).find("simulate.N") != std::string::npos);
  CHECK(message([] { parse_config("[simulate]\nspeed = 3\n"); }).find("speed") != std::string::npos);
  CHECK(message([] { parse_config("[nowhere]\n"); }).find("nowhere") != std::string::npos);
  CHECK(message([] { parse_config("[simulate]\nN = many\n"); }).find("simulate.N: expected") != std::string::npos);
  CHECK(message([] { parse_config("[simulate]\nN = -3\n"); }).find("simulate.N") != std::string::npos);
  CHECK(message([] { parse_config("[simulate]\nt = 1.5x\n"); }).find("simulate.t") != std::string::npos);
  CHECK(message([] { parse_config("[simulate]\nevents = yes\n"); }).find("simulate.events") != std::string::npos);
  CHECK(message([] { parse_config("N = 3\n"); }).find("line 1") != std::string::npos);
  CHECK(message([] { parse_config_file("/nonexistent/bbees.ini"); }).find("cannot open") != std::string::npos);
  const auto late = parse_config("[boundary]\nT = 1\neta = 1\n");
  CHECK(message([&] { validate(late, "boundary"); }).find("eta") != std::string::npos);
  CHECK(message([] { validate(RunConfig{}, "bogus"); }).find("bogus") != std::string::npos);
}

TEST_CASE("comments and whitespace") {
  const auto c = parse_config("[solve]  # the solver\n  d = 3 ; dimension\n\tt=2\n");
  CHECK(c.solve.d == 3);
  CHECK(c.solve.t == 2.0);
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("empty config runs stationary") {
  RunConfig c;
  c.run.out = scratch("stationary").string();
  std::ostringstream log;
  const auto res = run("stationary", c, log);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(res.root / "V.csv"));
  const auto summary = nlohmann::json::parse(slurp(res.root / "summary.json"));
  CHECK(summary["r_infinity"].get<double>() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  const auto manifest = nlohmann::json::parse(slurp(res.root / "manifest.json"));
  for (const auto& a : manifest["artifacts"]) {
    CHECK(sha256_hex(slurp(res.root / a["name"].get<std::string>())) == a["sha256"].get<std::string>());
  }
  for (const auto& e : fs::directory_iterator(res.root)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("solve from V brackets the stationary radius") {
  RunConfig c;
  c.run.out = scratch("solve").string();
  std::ostringstream log;
  const auto res = run("solve", c, log);
  CHECK(res.exit_code == 0);
  const auto s = nlohmann::json::parse(slurp(res.root / "summary.json"));
  const double lo = s["boundary_interval"][0], hi = s["boundary_interval"][1];
  CHECK(lo <= std::numbers::pi / 2);
  CHECK(std::numbers::pi / 2 <= hi);
  CHECK(s["analytic_gap"].get<double>() == doctest::Approx(0.0373693536).epsilon(1e-8));
}

TEST_CASE("artifacts do not depend on worker count") {
  RunConfig c;
  c.hydro.N = 200;
  c.hydro.replicas = 3;
  c.hydro.allow_small_N = true;
  c.hydro.t = 0.5;
  std::ostringstream log;
  c.run.out = scratch("w1").string();
  const auto a = run("hydro", c, log);
  c.run.workers = 3;
  c.run.out = scratch("w3").string();
  const auto b = run("hydro", c, log);
  CHECK(a.manifest_sha256 == b.manifest_sha256);

  c.simulate.N = 30;
  c.run.out = scratch("s1").string();
  const auto s1 = run("simulate", c, log);
  c.run.out = scratch("s2").string();
  const auto s2 = run("simulate", c, log);
  CHECK(s1.manifest_sha256 == s2.manifest_sha256);
  c.run.seed = 2;
  const auto s3 = run("simulate", c, log);
  CHECK(s3.manifest_sha256 != s1.manifest_sha256);
}
