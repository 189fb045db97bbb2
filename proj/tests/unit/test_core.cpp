#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bbees/core/empirical.hpp"
#include "bbees/core/errors.hpp"
#include "bbees/core/parallel.hpp"
#include "bbees/core/particle_ensemble.hpp"
#include "bbees/core/profile_io.hpp"
#include "bbees/core/radial_profile.hpp"
#include "bbees/core/sandwich_pair.hpp"

using namespace bbees;

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(ParticleEnsemble(0, {1.0}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(2, {1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(1, {}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(1, {NAN}), DomainError);
  CHECK_THROWS_AS(ParticleEnsemble(1, {1.0}, -1.0), DomainError);
  const auto e = ParticleEnsemble::at_origin(3, 5);
  CHECK(e.population() == 5);
  CHECK(e.dim() == 3);
}

TEST_CASE("empirical cdf of points at the origin") {
  const auto f = empirical_cdf(ParticleEnsemble::at_origin(2, 4));
  CHECK(f(0.0) == 0.0);
  CHECK(f(1e-300) == 1.0);
  CHECK(f(5.0) == 1.0);
}

TEST_CASE("empirical cdf counts open balls") {
  const auto f = empirical_cdf(ParticleEnsemble(1, {0.5, -1.5}));
  REQUIRE(f.size() == 2);
  CHECK(f.jumps()[0] == RadialProfile::Jump{0.5, 0.5});
  CHECK(f.jumps()[1] == RadialProfile::Jump{1.5, 1.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(0.50001) == 0.5);
  CHECK(f(1.5) == 0.5);
  CHECK(f(1.6) == 1.0);
}

TEST_CASE("max radius") {
  CHECK(max_radius(ParticleEnsemble::at_origin(1, 3)) == 0.0);
  const ParticleEnsemble e(2, {3.0, 4.0, 0.0, 1.0});
  CHECK(max_radius(e) == doctest::Approx(5.0));
  const auto f = empirical_cdf(e);
  CHECK(f(max_radius(e)) < 1.0);
  CHECK(f(std::nextafter(max_radius(e), 10.0)) == 1.0);
}

TEST_CASE("in_gamma thresholds") {
  std::vector<double> x(10, 5.0);
  x[0] = x[1] = x[2] = 0.1;
  const ParticleEnsemble e(1, x);
  CHECK(in_gamma(e, 1.0, 0.3));
  CHECK_FALSE(in_gamma(e, 1.0, 0.31));
  CHECK(in_gamma(ParticleEnsemble::at_origin(2, 7), 0.01, 1.0));
  CHECK(in_gamma(e, 6.0, 1.0));
  CHECK_THROWS_AS(in_gamma(e, 0.0, 0.5), DomainError);
}

TEST_CASE("measure_of_set consistency") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  std::vector<double> x(300);
  for (auto& v : x) v = nd(gen);
  const ParticleEnsemble e(3, x);
  const auto f = empirical_cdf(e);
  CHECK(measure_of_set(e, [](auto) { return true; }) == 1.0);
  for (double r : {0.3, 1.0, 1.7, 3.0}) {
    CHECK(measure_of_set(e, [r](auto p) { return euclidean_norm(p) < r; }) == doctest::Approx(f(r)));
  }
  const double a = measure_of_set(e, [](auto p) { return p[0] > 0.0; });
  const double b = measure_of_set(e, [](auto p) { return p[0] <= 0.0; });
  CHECK(a + b == doctest::Approx(1.0));
}

TEST_CASE("DKW concentration for uniform samples") {
  // P(sup|F_N - F| > 0.062) <= 2 exp(-2 N 0.062^2) ~ 9e-4 for N = 1000.
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int ok = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> x(1000);
    for (auto& v : x) v = u(gen);
    const auto f = empirical_cdf(ParticleEnsemble(1, x));
    ok += sup_distance(f, [](double r) { return std::min(r, 1.0); }, 1.0) <= 0.062 ? 1 : 0;
  }
  CHECK(ok >= 0.95 * reps);
}

TEST_CASE("radial profile invariants") {
  CHECK_THROWS_AS(RadialProfile({{1.0, 0.5}, {1.0, 0.6}}, 2.0), DomainError);
  CHECK_THROWS_AS(RadialProfile({{1.0, 0.5}, {2.0, 0.4}}, 3.0), DomainError);
  CHECK_THROWS_AS(RadialProfile({{1.0, 1.5}}, 3.0), DomainError);
  CHECK_THROWS_AS(RadialProfile({{1.0, 0.5}}, 1.0), DomainError);
  CHECK_THROWS_AS(RadialProfile({{-1.0, 0.5}}, 1.0), DomainError);
  const RadialProfile f({{0.5, 0.25}, {1.0, 0.75}}, 4.0);
  CHECK(f(0.0) == 0.0);
  CHECK(f(0.5) == 0.0);
  CHECK(f(0.7) == 0.25);
  CHECK(f(4.0) == 0.75);
  CHECK(f(100.0) == 0.75);
  CHECK_FALSE(f.has_jump_at_origin());
  CHECK(RadialProfile({{0.0, 1.0}}, 1.0).has_jump_at_origin());
}

TEST_CASE("from_nodes drops flat entries and clamps") {
  const std::vector<RadialProfile::Jump> nodes{{0.1, 0.0}, {0.2, 0.3}, {0.3, 0.3}, {0.4, 1.2}, {0.5, 0.9}};
  const auto f = RadialProfile::from_nodes(nodes, 2.0);
  REQUIRE(f.size() == 2);
  CHECK(f.jumps()[0] == RadialProfile::Jump{0.2, 0.3});
  CHECK(f.jumps()[1] == RadialProfile::Jump{0.4, 1.0});
}

namespace {

RadialProfile random_profile(std::mt19937_64& gen, int n, double cap = 5.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> loc(n), val(n);
  for (auto& v : loc) v = 4.0 * u(gen);
  for (auto& v : val) v = u(gen);
  std::sort(loc.begin(), loc.end());
  std::sort(val.begin(), val.end());
  std::vector<RadialProfile::Jump> j;
  for (int i = 0; i < n; ++i) j.push_back({loc[i], val[i]});
  return RadialProfile::from_nodes(j, cap);
}

double brute_sup(const RadialProfile& a, const RadialProfile& b) {
  // Evaluate at every breakpoint and just after it.
  double s = 0.0;
  for (double x : merged_breakpoints({&a, &b})) {
    s = std::max(s, std::abs(a(x) - b(x)));
    const double y = std::nextafter(x, 10.0);
    s = std::max(s, std::abs(a(y) - b(y)));
  }
  return std::max(s, std::abs(a(9.0) - b(9.0)));
}

}  // namespace

TEST_CASE("sup distances agree with brute force") {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 50; ++k) {
    const auto a = random_profile(gen, 1 + k % 7);
    const auto b = random_profile(gen, 1 + k % 5);
    CHECK(sup_distance(a, b) == doctest::Approx(brute_sup(a, b)));
    CHECK(sup_distance(a, b) == sup_distance(b, a));
  }
  const RadialProfile f({{0.5, 0.5}}, 2.0);
  CHECK(sup_distance(f, [](double r) { return std::min(r, 1.0); }, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("bracket distance and containment") {
  const RadialProfile lo({{0.5, 0.2}, {1.0, 0.6}}, 3.0);
  const RadialProfile hi({{0.2, 0.3}, {0.8, 0.9}}, 3.0);
  const RadialProfile inside({{0.5, 0.3}, {0.9, 0.7}}, 3.0);
  CHECK(ordering_violation(lo, hi) == 0.0);
  CHECK(bracket_distance(inside, lo, hi) == 0.0);
  const RadialProfile outside({{0.1, 0.5}}, 3.0);
  CHECK(bracket_distance(outside, lo, hi) == doctest::Approx(0.5));
  CHECK(ordering_violation(hi, lo) > 0.0);
  const RadialProfile top({{0.0, 1.0}}, 3.0);
  CHECK(containment_violation(RadialProfile::zero(3.0), top, [](double r) { return std::min(r, 1.0); }, 1.0) == 0.0);
  CHECK(containment_violation(lo, top, [](double r) { return std::min(r, 1.0); }, 1.0) == 0.0);
  CHECK(containment_violation(RadialProfile({{0.1, 0.5}}, 3.0), top, [](double r) { return std::min(r, 1.0); }, 1.0) ==
        doctest::Approx(0.4));
}

TEST_CASE("sandwich pair mid and gap") {
  SandwichPair p;
  p.lower = RadialProfile({{0.5, 0.2}, {1.0, 0.6}}, 3.0);
  p.upper = RadialProfile({{0.2, 0.3}, {0.8, 0.9}}, 3.0);
  const auto m = p.mid();
  CHECK(m(0.3) == doctest::Approx(0.15));
  CHECK(m(0.6) == doctest::Approx(0.25));
  CHECK(m(0.9) == doctest::Approx(0.55));
  CHECK(m(2.0) == doctest::Approx(0.75));
  CHECK(p.measured_gap() == doctest::Approx(0.7));
}

TEST_CASE("profile csv and json round trip") {
  std::mt19937_64 gen(5);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_profile(gen, 1 + k);
    std::stringstream ss;
    write_profile_csv(ss, f);
    CHECK(read_profile_csv(ss) == f);
    CHECK(profile_from_json(profile_to_json(f, 2)) == f);
  }
  std::stringstream zero;
  write_profile_csv(zero, RadialProfile::zero(2.5));
  CHECK(read_profile_csv(zero) == RadialProfile::zero(2.5));
  std::stringstream bad("r,value\n0.5,abc\n");
  CHECK_THROWS_AS(read_profile_csv(bad), ConfigError);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("parallel_for is deterministic and propagates errors") {
  std::vector<double> a(1000), b(1000);
  parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  CHECK(a == b);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 5) throw ResourceError("x"); }), ResourceError);
}
