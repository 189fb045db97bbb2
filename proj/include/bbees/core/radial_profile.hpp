#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace bbees {

/// Nondecreasing step function [0, inf) -> [0, 1].
///
/// A jump (a, v) means the profile equals v on (a, next jump]. Evaluation at a
/// jump location returns the pre-jump value, so an empirical profile built
/// from norms gives F(r) = fraction of points with norm < r (open balls).
/// Beyond the last jump, and in particular for r >= domain_cap, the profile
/// equals its last value.
class RadialProfile {
 public:
  struct Jump {
    double location;
    double value;
    bool operator==(const Jump&) const = default;
  };

  RadialProfile();  // zero profile with domain_cap 1
  RadialProfile(std::vector<Jump> jumps, double domain_cap);

  static RadialProfile zero(double domain_cap = 1.0);
  /// The indicator r -> height * 1{r > a}.
  static RadialProfile step(double a, double height = 1.0, double domain_cap = 0.0);
  /// Builds a profile from (location, value) pairs sorted by location, dropping
  /// entries that do not raise the value. Values are clamped to [0, 1].
  static RadialProfile from_nodes(std::span<const Jump> nodes, double domain_cap);
  /// Default cap when none is requested: one unit beyond the last jump.
  static double default_cap(std::span<const Jump> jumps);

  double operator()(double r) const;
  double evaluate(double r) const { return (*this)(r); }

  std::span<const Jump> jumps() const noexcept { return jumps_; }
  std::size_t size() const noexcept { return jumps_.size(); }
  bool empty() const noexcept { return jumps_.empty(); }
  double domain_cap() const noexcept { return cap_; }
  double terminal_value() const noexcept { return jumps_.empty() ? 0.0 : jumps_.back().value; }
  /// Location of the last jump, or 0 for the zero profile.
  double last_location() const noexcept { return jumps_.empty() ? 0.0 : jumps_.back().location; }
  bool has_jump_at_origin() const noexcept { return !jumps_.empty() && jumps_.front().location == 0.0; }

  RadialProfile with_cap(double domain_cap) const;

  bool operator==(const RadialProfile&) const = default;

 private:
  std::vector<Jump> jumps_;
  double cap_;
};

/// Sorted union of the jump locations of several profiles.
std::vector<double> merged_breakpoints(std::initializer_list<const RadialProfile*> profiles);

/// sup_r |a(r) - b(r)|.
double sup_distance(const RadialProfile& a, const RadialProfile& b);

/// sup_r |f(r) - g(r)| for a continuous nondecreasing g with limit g_limit at infinity.
double sup_distance(const RadialProfile& f, const std::function<double(double)>& g, double g_limit);

/// sup_r max(0, f - upper, lower - f): zero whenever f lies inside the bracket.
double bracket_distance(const RadialProfile& f, const RadialProfile& lower, const RadialProfile& upper);

/// Largest amount by which lower(r) <= upper(r) fails (0 if it always holds).
double ordering_violation(const RadialProfile& lower, const RadialProfile& upper);

/// Largest violation of lower(r) <= g(r) <= upper(r) for a continuous nondecreasing g.
double containment_violation(const RadialProfile& lower, const RadialProfile& upper,
                             const std::function<double(double)>& g, double g_limit);

}  // namespace bbees
