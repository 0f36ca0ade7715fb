#include "cskde/errors.hpp"
#include "cskde/simd/kernel_sums.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace cskde::simd {

namespace {

Isa best_supported()
{
#if defined(CSKDE_HAVE_AVX2)
  if (isa_supported(Isa::avx2))
    return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_isa()
{
  if (const char* env = std::getenv("CSKDE_SIMD")) {
    const std::string want(env);
    if (want == "scalar")
      return Isa::scalar;
    if (want == "avx2" && isa_supported(Isa::avx2))
      return Isa::avx2;
  }
  return best_supported();
}

std::atomic<Isa>& active()
{
  static std::atomic<Isa> isa{ initial_isa() };
  return isa;
}

} // namespace

std::string_view isa_name(Isa isa)
{
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::scalar:
      break;
  }
  return "scalar";
}

bool isa_supported(Isa isa)
{
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CSKDE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa()
{
  return active().load(std::memory_order_relaxed);
}

void set_active_isa(Isa isa)
{
  if (!isa_supported(isa))
    throw ValidationError("SIMD variant '" + std::string(isa_name(isa)) +
                          "' is not supported on this CPU");
  active().store(isa, std::memory_order_relaxed);
}

KernelSums biweight_sums(std::span<const double> v, double x, double inv_h)
{
#if defined(CSKDE_HAVE_AVX2)
  if (active_isa() == Isa::avx2)
    return avx2::biweight_sums(v, x, inv_h);
#endif
  return scalar::biweight_sums(v, x, inv_h);
}

KernelSums biweight_sums(std::span<const double> v,
                         std::span<const double> weights,
                         double x,
                         double inv_h)
{
#if defined(CSKDE_HAVE_AVX2)
  if (active_isa() == Isa::avx2)
    return avx2::biweight_sums(v, weights, x, inv_h);
#endif
  return scalar::biweight_sums(v, weights, x, inv_h);
}

} // namespace cskde::simd
