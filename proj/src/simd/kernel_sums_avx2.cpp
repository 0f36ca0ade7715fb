// AVX2+FMA biweight sums, 4 doubles per step.
// Compiled with -mavx2 -mfma; only called after a runtime CPUID check.

#include "cskde/simd/kernel_sums.hpp"

#include <immintrin.h>

#include <cstddef>

namespace cskde::simd::avx2 {

namespace {

constexpr double kValue = 15.0 / 16.0;
constexpr double kDeriv = -15.0 / 4.0;

inline double hsum(__m256d v)
{
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

KernelSums biweight_sums(std::span<const double> v, double x, double inv_h)
{
  const std::size_t n = v.size();
  const double* p = v.data();

  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d three = _mm256_set1_pd(3.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vx, _mm256_loadu_pd(p + i)), vih);
    const __m256d u2 = _mm256_mul_pd(u, u);
    const __m256d inside = _mm256_cmp_pd(u2, one, _CMP_LT_OQ);
    const __m256d a = _mm256_and_pd(inside, _mm256_sub_pd(one, u2));
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(u, a, acc1);
    acc2 = _mm256_add_pd(acc2, _mm256_and_pd(inside, _mm256_fnmadd_pd(three, u2, one)));
  }

  double s0 = hsum(acc0), s1 = hsum(acc1), s2 = hsum(acc2);
  for (; i < n; ++i) {
    const double u = (x - p[i]) * inv_h;
    const double u2 = u * u;
    if (u2 < 1.0) {
      const double a = 1.0 - u2;
      s0 += a * a;
      s1 += u * a;
      s2 += 1.0 - 3.0 * u2;
    }
  }
  return { kValue * s0, kDeriv * s1, kDeriv * s2 };
}

KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h)
{
  const std::size_t n = v.size();
  const double* p = v.data();
  const double* c = weights.data();

  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d three = _mm256_set1_pd(3.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(vx, _mm256_loadu_pd(p + i)), vih);
    const __m256d u2 = _mm256_mul_pd(u, u);
    const __m256d inside = _mm256_cmp_pd(u2, one, _CMP_LT_OQ);
    const __m256d cw = _mm256_and_pd(inside, _mm256_loadu_pd(c + i));
    const __m256d a = _mm256_sub_pd(one, u2);
    acc0 = _mm256_fmadd_pd(cw, _mm256_mul_pd(a, a), acc0);
    acc1 = _mm256_fmadd_pd(cw, _mm256_mul_pd(u, a), acc1);
    acc2 = _mm256_fmadd_pd(cw, _mm256_fnmadd_pd(three, u2, one), acc2);
  }

  double s0 = hsum(acc0), s1 = hsum(acc1), s2 = hsum(acc2);
  for (; i < n; ++i) {
    const double u = (x - p[i]) * inv_h;
    const double u2 = u * u;
    if (u2 < 1.0) {
      const double a = 1.0 - u2;
      s0 += c[i] * (a * a);
      s1 += c[i] * (u * a);
      s2 += c[i] * (1.0 - 3.0 * u2);
    }
  }
  return { kValue * s0, kDeriv * s1, kDeriv * s2 };
}

} // namespace cskde::simd::avx2
