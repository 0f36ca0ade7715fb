#pragma once

// Data-parallel kernel sums behind every estimator in the library.
//
// For data v_i, evaluation point x and inverse bandwidth 1/h the routines
// return the sums of w(u_i), w'(u_i) and w''(u_i) with u_i = (x - v_i)/h,
// over the open support |u_i| < 1. A scalar reference implementation and an
// AVX2+FMA variant exist; the variant is picked at runtime from CPUID and can
// be pinned with CSKDE_SIMD=scalar|avx2.

#include <span>
#include <string_view>

namespace cskde::simd {

struct KernelSums
{
  double value = 0.0;
  double deriv = 0.0;
  double second = 0.0;
};

enum class Isa
{
  scalar,
  avx2
};

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

//! Variant used by the dispatching entry points.
Isa active_isa();

//! Pin the dispatch variant; throws ValidationError if the CPU lacks it.
void set_active_isa(Isa isa);

KernelSums biweight_sums(std::span<const double> v, double x, double inv_h);

//! Weighted form, used for binned (WARPing) evaluation.
KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h);

namespace scalar {
KernelSums biweight_sums(std::span<const double> v, double x, double inv_h);
KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h);
} // namespace scalar

#if defined(CSKDE_HAVE_AVX2)
namespace avx2 {
KernelSums biweight_sums(std::span<const double> v, double x, double inv_h);
KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h);
} // namespace avx2
#endif

} // namespace cskde::simd
