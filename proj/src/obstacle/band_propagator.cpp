#include "band_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "bbees/core/parallel.hpp"

namespace bbees::detail {

BandPropagator::BandPropagator(const KernelContext& ctx, double delta, double h)
    : ctx_(ctx), delta_(delta), h_(h) {
  // |B_delta - B_0| exceeds sigma (sqrt(d) + 9) with probability below e^{-40.5}.
  const double sigma = std::sqrt(2.0 * delta);
  reach_ = sigma * (std::sqrt(static_cast<double>(ctx.dim)) + 9.0);
  band_ = static_cast<std::size_t>(std::ceil(reach_ / h)) + 1;
}

std::shared_ptr<BandPropagator> BandPropagator::shared(const KernelContext& ctx, double delta, double h) {
  using Key = std::tuple<int, double, double, double>;
  static std::mutex m;
  static std::map<Key, std::shared_ptr<BandPropagator>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[Key{ctx.dim, ctx.tolerance, delta, h}];
  if (!slot) slot = std::make_shared<BandPropagator>(ctx, delta, h);
  return slot;
}

BandPropagator::Row BandPropagator::build_row(std::size_t i) const {
  Row row;
  const double r = static_cast<double>(i) * h_;
  row.w0 = radial_cdf(ctx_, 0.0, r, delta_);
  row.lo = i > band_ ? i - band_ : 0;
  const std::size_t hi = i + band_;
  const std::size_t n = hi - row.lo + 1;
  std::vector<double> node(n + 1), mid(n);
  for (std::size_t k = 0; k <= n; ++k) node[k] = radial_cdf(ctx_, static_cast<double>(row.lo + k) * h_, r, delta_);
  for (std::size_t k = 0; k < n; ++k) {
    mid[k] = radial_cdf(ctx_, (static_cast<double>(row.lo + k) + 0.5) * h_, r, delta_);
  }
  row.a.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double simpson = (node[k] + 4.0 * mid[k] + node[k + 1]) / 6.0;
    const double trapezoid = (node[k] + 2.0 * mid[k] + node[k + 1]) / 4.0;
    row.a[k] = simpson;
    row.err = std::max(row.err, std::abs(simpson - trapezoid) / 15.0);
  }
  return row;
}

std::vector<const BandPropagator::Row*> BandPropagator::rows(std::size_t count, int workers) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::size_t have = rows_.size();
  if (count > have) {
    std::vector<std::unique_ptr<Row>> fresh(count - have);
    parallel_for(fresh.size(), workers, [&](std::size_t k) { fresh[k] = std::make_unique<Row>(build_row(have + k)); });
    for (auto& p : fresh) rows_.push_back(std::move(p));
  }
  std::vector<const Row*> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = rows_[k].get();
  return out;
}

}  // namespace bbees::detail
