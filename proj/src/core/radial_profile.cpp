#include "bbees/core/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbees/core/errors.hpp"

namespace bbees {

namespace {

void validate(const std::vector<RadialProfile::Jump>& jumps, double cap) {
  double prev_loc = -1.0;
  double prev_val = 0.0;
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const auto& j = jumps[i];
    if (!std::isfinite(j.location) || j.location < 0.0) {
      throw DomainError("RadialProfile: jump " + std::to_string(i) + " has invalid location");
    }
    if (j.location <= prev_loc) throw DomainError("RadialProfile: jump locations must be strictly increasing");
    if (!(j.value >= 0.0 && j.value <= 1.0)) {
      throw DomainError("RadialProfile: jump " + std::to_string(i) + " value outside [0,1]");
    }
    if (j.value < prev_val) throw DomainError("RadialProfile: values must be nondecreasing");
    prev_loc = j.location;
    prev_val = j.value;
  }
  if (!std::isfinite(cap) || cap <= 0.0) throw DomainError("RadialProfile: domain_cap must be positive and finite");
  if (!jumps.empty() && cap <= jumps.back().location) {
    throw DomainError("RadialProfile: domain_cap must exceed the last jump location");
  }
}

// Pre-jump value at each breakpoint, i.e. the value on the cell ending there.
double left_value(const RadialProfile& f, double b) { return f(b); }

}  // namespace

RadialProfile::RadialProfile() : cap_(1.0) {}

RadialProfile::RadialProfile(std::vector<Jump> jumps, double domain_cap)
    : jumps_(std::move(jumps)), cap_(domain_cap) {
  validate(jumps_, cap_);
}

RadialProfile RadialProfile::zero(double domain_cap) { return RadialProfile({}, domain_cap); }

RadialProfile RadialProfile::step(double a, double height, double domain_cap) {
  if (domain_cap <= 0.0) domain_cap = a + 1.0;
  if (height <= 0.0) return zero(domain_cap);
  return RadialProfile({{a, height}}, domain_cap);
}

double RadialProfile::default_cap(std::span<const Jump> jumps) {
  return jumps.empty() ? 1.0 : jumps.back().location + 1.0;
}

RadialProfile RadialProfile::from_nodes(std::span<const Jump> nodes, double domain_cap) {
  std::vector<Jump> out;
  out.reserve(nodes.size());
  double level = 0.0;
  for (const auto& n : nodes) {
    const double v = std::clamp(n.value, 0.0, 1.0);
    if (v <= level) continue;
    if (!out.empty() && n.location <= out.back().location) {
      out.back().value = v;
    } else {
      out.push_back({n.location, v});
    }
    level = v;
  }
  if (domain_cap <= 0.0) domain_cap = default_cap(out);
  return RadialProfile(std::move(out), domain_cap);
}

double RadialProfile::operator()(double r) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), r,
                             [](const Jump& j, double x) { return j.location < x; });
  return it == jumps_.begin() ? 0.0 : std::prev(it)->value;
}

RadialProfile RadialProfile::with_cap(double domain_cap) const { return RadialProfile(jumps_, domain_cap); }

std::vector<double> merged_breakpoints(std::initializer_list<const RadialProfile*> profiles) {
  std::vector<double> b;
  for (const auto* p : profiles) {
    for (const auto& j : p->jumps()) b.push_back(j.location);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double sup_distance(const RadialProfile& a, const RadialProfile& b) {
  double s = std::abs(a.terminal_value() - b.terminal_value());
  for (double x : merged_breakpoints({&a, &b})) s = std::max(s, std::abs(left_value(a, x) - left_value(b, x)));
  return s;
}

double sup_distance(const RadialProfile& f, const std::function<double(double)>& g, double g_limit) {
  const auto bp = merged_breakpoints({&f});
  double prev = 0.0;
  double s = std::abs(g(0.0));
  for (double x : bp) {
    const double c = f(x);
    s = std::max({s, std::abs(c - g(prev)), std::abs(c - g(x))});
    prev = x;
  }
  const double c = f.terminal_value();
  s = std::max({s, std::abs(c - g(prev)), std::abs(c - g_limit)});
  return s;
}

double bracket_distance(const RadialProfile& f, const RadialProfile& lower, const RadialProfile& upper) {
  auto at = [](double fv, double lv, double uv) { return std::max({0.0, fv - uv, lv - fv}); };
  double s = at(f.terminal_value(), lower.terminal_value(), upper.terminal_value());
  for (double x : merged_breakpoints({&f, &lower, &upper})) s = std::max(s, at(f(x), lower(x), upper(x)));
  return s;
}

double ordering_violation(const RadialProfile& lower, const RadialProfile& upper) {
  double s = std::max(0.0, lower.terminal_value() - upper.terminal_value());
  for (double x : merged_breakpoints({&lower, &upper})) s = std::max(s, lower(x) - upper(x));
  return s;
}

double containment_violation(const RadialProfile& lower, const RadialProfile& upper,
                             const std::function<double(double)>& g, double g_limit) {
  // On each cell (a, b] both profiles are constant while g sweeps [g(a), g(b)].
  const auto bp = merged_breakpoints({&lower, &upper});
  double s = 0.0;
  double prev = 0.0;
  for (double x : bp) {
    s = std::max({s, lower(x) - g(prev), g(x) - upper(x)});
    prev = x;
  }
  s = std::max({s, lower.terminal_value() - g(prev), g_limit - upper.terminal_value()});
  return std::max(0.0, s);
}

}  // namespace bbees
