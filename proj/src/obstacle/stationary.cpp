#include "bbees/obstacle/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "bbees/core/errors.hpp"
#include "bbees/kernel/bessel_zero.hpp"

namespace bbees {

namespace {

constexpr int kCells = 512;

}  // namespace

StationaryState::StationaryState(int dim) : dim_(dim), nu_(0.5 * dim - 1.0) {
  if (dim < 1 || dim > kMaxDim) {
    throw DomainError("stationary_state: dimension " + std::to_string(dim) + " outside supported range 1..12");
  }
  r_inf_ = first_bessel_zero(nu_);
  sphere_ = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
  auto f = [this](double r) { return radial_integrand(r); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  table_.assign(kCells + 1, 0.0);
  const double w = r_inf_ / kCells;
  for (int k = 0; k < kCells; ++k) {
    table_[k + 1] = table_[k] + GK::integrate(f, k * w, (k + 1) * w, 3, 1e-13);
  }
  integral_ = table_.back();
  amplitude_ = 1.0 / (sphere_ * integral_);
}

StationaryState stationary_state(int dim) { return StationaryState(dim); }

double StationaryState::phi(double r) const {
  if (r < 1e-2) {
    // sum_k (-1)^k (r/2)^{2k} / (k! Gamma(k + nu + 1)) / 2^nu
    const double q = 0.25 * r * r;
    double term = 1.0 / std::tgamma(nu_ + 1.0);
    double s = term;
    for (int k = 1; k < 8; ++k) {
      term *= -q / (k * (k + nu_));
      s += term;
    }
    return s / std::pow(2.0, nu_);
  }
  return std::pow(r, -nu_) * boost::math::cyl_bessel_j(nu_, r);
}

double StationaryState::radial_integrand(double r) const { return std::pow(r, dim_ - 1) * phi(r); }

double StationaryState::U_radial(double r) const {
  if (r < 0.0) r = -r;
  if (r >= r_inf_) return 0.0;
  return std::max(0.0, amplitude_ * phi(r));
}

double StationaryState::U(std::span<const double> x) const {
  double s = 0.0;
  for (double v : x) s += v * v;
  return U_radial(std::sqrt(s));
}

double StationaryState::cumulative(double r) const {
  const double w = r_inf_ / kCells;
  const int k = std::min(kCells - 1, static_cast<int>(r / w));
  const double a = k * w;
  auto f = [this](double s) { return radial_integrand(s); };
  return table_[k] + boost::math::quadrature::gauss<double, 10>::integrate(f, a, r);
}

double StationaryState::V(double r) const {
  if (r <= 0.0) return 0.0;
  if (r >= r_inf_) return 1.0;
  return std::clamp(cumulative(r) / integral_, 0.0, 1.0);
}

double StationaryState::V_density(double r) const {
  if (r <= 0.0 || r >= r_inf_) return 0.0;
  return sphere_ * std::pow(r, dim_ - 1) * U_radial(r);
}

double StationaryState::V_inverse(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return r_inf_;
  const double target = p * integral_;
  const auto it = std::upper_bound(table_.begin(), table_.end(), target);
  const int k = std::clamp(static_cast<int>(it - table_.begin()) - 1, 0, kCells - 1);
  double lo = r_inf_ * k / kCells;
  double hi = r_inf_ * (k + 1) / kCells;
  double x = 0.5 * (lo + hi);
  // Safeguarded Newton on V(x) = p within one table cell.
  for (int it2 = 0; it2 < 60; ++it2) {
    const double fx = V(x) - p;
    if (fx > 0.0) hi = x; else lo = x;
    const double dens = V_density(x);
    double nx = dens > 0.0 ? x - fx / dens : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) < 1e-15 * r_inf_ || hi - lo < 1e-15 * r_inf_) return nx;
    x = nx;
  }
  return x;
}

RadialProfile StationaryState::V_profile(double spacing, bool round_up) const {
  if (!(spacing > 0.0)) throw DomainError("V_profile: spacing must be positive");
  const auto n = static_cast<int>(std::ceil(r_inf_ / spacing));
  std::vector<RadialProfile::Jump> nodes;
  for (int i = 0; i < n; ++i) {
    const double a = i * spacing;
    const double b = std::min(r_inf_, (i + 1) * spacing);
    nodes.push_back({a, round_up ? V(b) : V(a)});
  }
  nodes.push_back({r_inf_, 1.0});
  return RadialProfile::from_nodes(nodes, r_inf_ + 1.0);
}

double StationaryState::eigen_residual(std::span<const double> x, double h) const {
  std::vector<double> p(x.begin(), x.end());
  const double u0 = U(p);
  double lap = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double keep = p[c];
    p[c] = keep + h;
    const double up = U(p);
    p[c] = keep - h;
    const double dn = U(p);
    p[c] = keep;
    lap += up - 2.0 * u0 + dn;
  }
  return std::abs(lap / (h * h) + u0);
}

double StationaryState::total_mass() const {
  auto f = [this](double r) { return sphere_ * std::pow(r, dim_ - 1) * U_radial(r); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, r_inf_, 8, 1e-13);
}

}  // namespace bbees
