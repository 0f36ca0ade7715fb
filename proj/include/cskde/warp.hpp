#pragma once

#include "cskde/density.hpp"

#include <span>
#include <vector>

namespace cskde {

/// Linear-binning grid of a sample (WARPing). Each value splits unit mass
/// between its two neighbouring grid points in proportion to proximity, so
/// the binned kernel sums are second order in bin_width/h.
class WarpGrid
{
public:
  WarpGrid(std::span<const double> values, double origin, double bin_width);

  //! Grid anchored at the support origin with bin_width = fraction * h.
  static WarpGrid for_bandwidth(const TransformedSample& V, double h, double fraction = 1.0 / 20.0);

  double origin() const { return origin_; }
  double bin_width() const { return width_; }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t sample_size() const { return n_; }

private:
  double origin_;
  double width_;
  std::size_t n_;
  std::vector<double> centers_;
  std::vector<double> weights_;
};

//! Binned g_hat and g_hat'. Throws ValidationError when bin_width > h.
GEstimate::Point warp_at(const WarpGrid& grid, const Kernel& k, double h, double x);
double warp_g_hat(const WarpGrid& grid, const Kernel& k, double h, double x);
double warp_g_hat_deriv(const WarpGrid& grid, const Kernel& k, double h, double x);

} // namespace cskde
