#include "cskde/warp.hpp"

#include "cskde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cskde {

WarpGrid::WarpGrid(std::span<const double> values, double origin, double bin_width)
  : origin_(origin)
  , width_(bin_width)
  , n_(values.size())
{
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw ValidationError("WARPing bin width must be positive and finite");
  if (values.empty())
    throw ValidationError("WARPing needs a non-empty sample");
  const double top = *std::max_element(values.begin(), values.end());
  if (*std::min_element(values.begin(), values.end()) < origin)
    throw ValidationError("WARPing origin lies above the smallest value");
  const auto bins = static_cast<std::size_t>(std::floor((top - origin) / bin_width)) + 2;
  weights_.assign(bins, 0.0);
  for (double v : values) {
    const double pos = (v - origin) / bin_width;
    const auto j = static_cast<std::size_t>(pos);
    const double r = pos - static_cast<double>(j);
    weights_[j] += 1.0 - r;
    weights_[j + 1] += r;
  }
  centers_.resize(bins);
  for (std::size_t j = 0; j < bins; ++j)
    centers_[j] = origin + static_cast<double>(j) * bin_width;
}

WarpGrid WarpGrid::for_bandwidth(const TransformedSample& V, double h, double fraction)
{
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ValidationError("WARPing bin fraction must lie in (0, 1]");
  return WarpGrid(V.values, V.support.a, fraction * h);
}

GEstimate::Point warp_at(const WarpGrid& grid, const Kernel& k, double h, double x)
{
  if (!(h > 0.0))
    throw ValidationError("bandwidth must be positive");
  if (grid.bin_width() > h)
    throw ValidationError("WARPing bin width exceeds the bandwidth");
  const auto c = grid.centers();
  const auto win = kernel_window(c, x, h);
  const std::size_t len = win.last - win.first;
  const auto s = kernel_sums(k, c.subspan(win.first, len), grid.weights().subspan(win.first, len), x, h);
  const double nh = static_cast<double>(grid.sample_size()) * h;
  return { s.value / nh, s.deriv / (nh * h) };
}

double warp_g_hat(const WarpGrid& grid, const Kernel& k, double h, double x)
{
  return warp_at(grid, k, h, x).g;
}

double warp_g_hat_deriv(const WarpGrid& grid, const Kernel& k, double h, double x)
{
  return warp_at(grid, k, h, x).dg;
}

} // namespace cskde
