#include "bbees/core/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "bbees/core/errors.hpp"

namespace bbees {

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw DomainError("chi_square_independence: need at least two rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw DomainError("chi_square_independence: need at least two columns");
  std::vector<double> rs(rows, 0.0), cs(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw DomainError("chi_square_independence: ragged table");
    for (std::size_t j = 0; j < cols; ++j) {
      rs[i] += table[i][j];
      cs[j] += table[i][j];
      total += table[i][j];
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = rs[i] * cs[j] / total;
      if (e > 0.0) r.statistic += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  r.dof = static_cast<int>((rows - 1) * (cols - 1));
  r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("nearest_rank: empty input");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("nearest_rank: q must lie in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-12));
  return values[std::max<std::size_t>(k, 1) - 1];
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("ols_slope: need two or more paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace bbees
