#include "bbees/kernel/radial_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bbees/core/errors.hpp"

namespace bbees {

namespace {

constexpr long kMaxTerms = 2'000'000;

void check_args(const KernelContext& ctx, double y, double r, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel: t must be positive, got " + std::to_string(t));
  if (!(y >= 0.0) || !(r >= 0.0)) throw DomainError("kernel: y and r must be nonnegative");
  if (ctx.dim < 1) throw DomainError("kernel: dimension must be >= 1");
}

// log of z^a e^{-z} / Gamma(a + 1)
double log_tau(double a, double z) { return a * std::log(z) - z - std::lgamma(a + 1.0); }

}  // namespace

KernelContext::KernelContext(int d, double tol) : dim(d), tolerance(tol) {
  if (d < 1) throw DomainError("KernelContext: dimension must be >= 1");
  if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("KernelContext: tolerance must lie in (0, 1e-6]");
}

KernelValues kernel_series(const KernelContext& ctx, double y, double r, double t) {
  check_args(ctx, y, r, t);
  const double half_d = 0.5 * ctx.dim;
  const double mu = y * y / (4.0 * t);
  const double sr = r / (2.0 * t);
  const double sy = y / (2.0 * t);
  KernelValues out;
  if (std::isinf(r)) {
    out.w = 1.0;
    return out;
  }
  if (r == 0.0) {
    if (ctx.dim == 1) out.g = std::exp(-mu) / std::sqrt(std::numbers::pi * t);
    return out;
  }
  const double z = r * r / (4.0 * t);
  const double eps = ctx.tolerance * 1e-3 / std::max({1.0, sr, sy});

  const long j0 = mu > 0.0 ? static_cast<long>(std::floor(mu)) : 0;
  const double a0 = half_d + static_cast<double>(j0);
  const double p0 =
      mu > 0.0 ? std::exp(-mu + static_cast<double>(j0) * std::log(mu) - std::lgamma(static_cast<double>(j0) + 1.0))
               : 1.0;
  const double P0 = boost::math::gamma_p(a0, z);
  // tau(a, z) = z^a e^{-z} / Gamma(a + 1). When it underflows here the Poisson
  // and gamma weights are separated by more than e^{-40}, so the lost terms are negligible.
  const double t0 = std::exp(log_tau(a0, z));
  const double tm0 = std::exp(log_tau(a0 - 1.0, z));

  double sw = 0.0, sg = 0.0, sG = 0.0;
  long terms = 0;

  // Upward from the Poisson mode.
  {
    double p = p0, P = P0, tau = t0, taum = tm0, a = a0;
    for (long j = j0;; ++j) {
      sw += p * P;
      sg += p * taum;
      sG += p * tau;
      if (++terms > kMaxTerms) throw EvaluationError("kernel series did not converge (mu=" + std::to_string(mu) + ")");
      if (mu == 0.0) break;
      const double ratio = mu / static_cast<double>(j + 1);
      if (ratio < 1.0 && p / (1.0 - ratio) < eps) break;
      // Past the gamma mode every factor keeps shrinking: the rest is below eps.
      if (a + 1.0 > z && P < eps && tau < eps && taum < eps) break;
      P = std::max(0.0, P - tau);
      taum = tau;
      tau *= z / (a + 1.0);
      a += 1.0;
      p *= ratio;
    }
  }
  // Downward from the mode.
  {
    double p = p0, P = P0, tau = t0, taum = tm0, a = a0;
    for (long j = j0 - 1; j >= 0; --j) {
      // Index j+1 -> j, so a -> a - 1.
      p *= static_cast<double>(j + 1) / mu;
      tau = taum;
      a -= 1.0;
      taum = tau * a / z;
      P = std::min(1.0, P + tau);
      sw += p * P;
      sg += p * taum;
      sG += p * tau;
      if (++terms > kMaxTerms) throw EvaluationError("kernel series did not converge (mu=" + std::to_string(mu) + ")");
      const double ratio = static_cast<double>(j) / mu;
      if (ratio < 1.0 && p * ratio / (1.0 - ratio) < eps) break;
      // Below the gamma mode P stays within eps of 1 and the densities keep
      // shrinking, so the remaining sum is the Poisson mass below j.
      if (j > 0 && a < z && 1.0 - P < eps && tau < eps && taum < eps) {
        sw += boost::math::gamma_q(static_cast<double>(j), mu);
        break;
      }
    }
  }
  out.w = std::clamp(sw, 0.0, 1.0);
  out.g = sr * sg;
  out.G = sy * sG;
  return out;
}

KernelValues kernel_closed_form(int dim, double y, double r, double t) {
  if (dim != 1 && dim != 3) throw DomainError("kernel_closed_form: only d = 1 and d = 3");
  if (!(t > 0.0)) throw DomainError("kernel: t must be positive");
  KernelValues out;
  if (std::isinf(r)) {
    out.w = 1.0;
    return out;
  }
  const double s = 2.0 * std::sqrt(t);
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  const double pm = norm * std::exp(-(r - y) * (r - y) / (4.0 * t));
  const double pp = norm * std::exp(-(r + y) * (r + y) / (4.0 * t));
  const double erfsum = 0.5 * (std::erf((r - y) / s) + std::erf((r + y) / s));
  if (dim == 1) {
    out.w = erfsum;
    out.g = pm + pp;
    out.G = pm - pp;
  } else {
    out.w = erfsum - (2.0 * t / y) * (pm - pp);
    out.g = (r / y) * (pm - pp);
    out.G = (r / y) * (pm + pp) - (2.0 * t / (y * y)) * (pm - pp);
  }
  out.w = std::clamp(out.w, 0.0, 1.0);
  out.g = std::max(0.0, out.g);
  out.G = std::max(0.0, out.G);
  return out;
}

KernelValues kernel_values(const KernelContext& ctx, double y, double r, double t) {
  check_args(ctx, y, r, t);
  if (ctx.dim == 1) return kernel_closed_form(1, y, r, t);
  // The d = 3 formula divides by y and cancels catastrophically near y = 0.
  if (ctx.dim == 3 && y >= 1e-3 * std::sqrt(t)) return kernel_closed_form(3, y, r, t);
  return kernel_series(ctx, y, r, t);
}

double radial_cdf(const KernelContext& ctx, double y, double r, double t) { return kernel_values(ctx, y, r, t).w; }

double bessel_density(const KernelContext& ctx, double y, double r, double t) {
  return kernel_values(ctx, y, r, t).g;
}

double kernel_G(const KernelContext& ctx, double y, double r, double t) {
  try {
    return kernel_values(ctx, y, r, t).G;
  } catch (const EvaluationError&) {
    return kernel_G_richardson(ctx, y, r, t);
  }
}

double kernel_G_richardson(const KernelContext& ctx, double y, double r, double t) {
  check_args(ctx, y, r, t);
  const double h = std::max(1e-5, 1e-3 * y);
  // w is even in y, so |y - h| is valid when h > y.
  auto D = [&](double s) {
    return (radial_cdf(ctx, std::abs(y - s), r, t) - radial_cdf(ctx, y + s, r, t)) / (2.0 * s);
  };
  return std::max(0.0, (4.0 * D(0.5 * h) - D(h)) / 3.0);
}

}  // namespace bbees
