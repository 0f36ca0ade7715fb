#include "cskde/stats.hpp"

#include "cskde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cskde {

namespace {

struct Central
{
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

Central central_moments(std::span<const double> x)
{
  const double mu = sample_mean(x);
  Central c;
  for (double v : x) {
    const double d = v - mu;
    const double d2 = d * d;
    c.m2 += d2;
    c.m3 += d2 * d;
    c.m4 += d2 * d2;
  }
  const double n = static_cast<double>(x.size());
  c.m2 /= n;
  c.m3 /= n;
  c.m4 /= n;
  return c;
}

} // namespace

double sample_mean(std::span<const double> x)
{
  if (x.empty())
    return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : x)
    s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x)
{
  if (x.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  const double mu = sample_mean(x);
  double s = 0.0;
  for (double v : x)
    s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x)
{
  return std::sqrt(sample_variance(x));
}

double skewness(std::span<const double> x)
{
  const auto c = central_moments(x);
  return c.m3 / std::pow(c.m2, 1.5);
}

double excess_kurtosis(std::span<const double> x)
{
  const auto c = central_moments(x);
  return c.m4 / (c.m2 * c.m2) - 3.0;
}

double sample_covariance(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw ValidationError("covariance needs samples of equal length");
  if (x.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  const double mx = sample_mean(x);
  const double my = sample_mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double median(std::span<const double> x)
{
  if (x.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1)
    return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

} // namespace cskde
