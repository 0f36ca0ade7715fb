#include "cskde/simd/kernel_sums.hpp"

#include <cstddef>

namespace cskde::simd::scalar {

namespace {

// w(u) = 15/16 (1-u^2)^2, w'(u) = -15/4 u (1-u^2), w''(u) = -15/4 (1-3u^2)
constexpr double kValue = 15.0 / 16.0;
constexpr double kDeriv = -15.0 / 4.0;

KernelSums finish(double s0, double s1, double s2)
{
  return { kValue * s0, kDeriv * s1, kDeriv * s2 };
}

} // namespace

KernelSums biweight_sums(std::span<const double> v, double x, double inv_h)
{
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (const double vi : v) {
    const double u = (x - vi) * inv_h;
    const double u2 = u * u;
    if (u2 < 1.0) {
      const double a = 1.0 - u2;
      s0 += a * a;
      s1 += u * a;
      s2 += 1.0 - 3.0 * u2;
    }
  }
  return finish(s0, s1, s2);
}

KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h)
{
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = (x - v[i]) * inv_h;
    const double u2 = u * u;
    if (u2 < 1.0) {
      const double a = 1.0 - u2;
      const double c = weights[i];
      s0 += c * (a * a);
      s1 += c * (u * a);
      s2 += c * (1.0 - 3.0 * u2);
    }
  }
  return finish(s0, s1, s2);
}

} // namespace cskde::simd::scalar
