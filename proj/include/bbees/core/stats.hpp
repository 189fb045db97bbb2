#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bbees {

/// sup |F_n - F| of a sample against a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double ks_p_value(double statistic, std::size_t n);

/// Pearson chi-square test of independence on a rows x cols contingency table.
struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table);

/// Nearest-rank quantile: the ceil(q n)-th smallest value (q in (0, 1]).
double nearest_rank(std::vector<double> values, double q);

/// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace bbees
