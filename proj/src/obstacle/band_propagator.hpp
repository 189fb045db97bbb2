#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "bbees/kernel/radial_kernel.hpp"

namespace bbees::detail {

/// Cell averages A_ij = (1/h) * integral over [r_j, r_{j+1}] of w(a, r_i, delta) da
/// on the uniform grid r_i = i h, stored for |i - j| <= B. Outside the band the
/// entries are 1 (j < i - B) or 0 (j > i + B) up to a Gaussian tail below e^{-40}.
class BandPropagator {
 public:
  struct Row {
    double w0 = 0.0;         // w(0, r_i, delta)
    std::size_t lo = 0;      // first stored column
    std::vector<double> a;   // a[k] = A_{i, lo + k}
    double err = 0.0;        // estimated quadrature error of one entry
  };

  BandPropagator(const KernelContext& ctx, double delta, double h);

  /// Shared instance per (d, tolerance, delta, h).
  static std::shared_ptr<BandPropagator> shared(const KernelContext& ctx, double delta, double h);

  std::size_t half_width() const noexcept { return band_; }
  double reach() const noexcept { return reach_; }
  double spacing() const noexcept { return h_; }
  double delta() const noexcept { return delta_; }
  const KernelContext& context() const noexcept { return ctx_; }

  /// Pointers to rows 0 .. count-1, building missing rows first.
  std::vector<const Row*> rows(std::size_t count, int workers);

 private:
  Row build_row(std::size_t i) const;

  KernelContext ctx_;
  double delta_;
  double h_;
  double reach_;
  std::size_t band_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<Row>> rows_;
};

}  // namespace bbees::detail
