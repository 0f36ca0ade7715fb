#pragma once

// Independent numerical references for the tests. Nothing here calls into
// the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

//! Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000)
{
  if (panels % 2)
    ++panels;
  const double h = (b - a) / panels;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i)
    (i % 2 ? odd : even) += f(a + i * h);
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

inline double central_diff(const std::function<double(double)>& f, double x, double eps)
{
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

inline double mean(const std::vector<double>& x)
{
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x)
{
  const double m = mean(x);
  double s = 0.0;
  for (const double v : x)
    s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

//! sup |F_n - F| for the empirical CDF of `sample`.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf)
{
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max({ d, std::abs(F - i / n), std::abs((i + 1) / n - F) });
  }
  return d;
}

//! Beta(2,2) density, CDF and derivatives written out by hand.
inline double beta22_pdf(double x) { return x > 0.0 && x < 1.0 ? 6.0 * x * (1.0 - x) : 0.0; }
inline double beta22_cdf(double x)
{
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

//! Biweight written out by hand.
inline double biweight(double u)
{
  if (std::abs(u) >= 1.0)
    return 0.0;
  const double a = 1.0 - u * u;
  return 15.0 / 16.0 * a * a;
}
inline double biweight_deriv(double u)
{
  if (std::abs(u) >= 1.0)
    return 0.0;
  return -15.0 / 4.0 * u * (1.0 - u * u);
}

} // namespace oracle
