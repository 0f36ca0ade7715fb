#pragma once

#include "cskde/quadrature.hpp"
#include "cskde/simd/kernel_sums.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cskde {

enum class KernelShape
{
  biweight, //!< closed form, SIMD kernel sums
  custom    //!< user supplied, scalar evaluation through RealFn
};

//! The three kernel integrals that appear in every bias/variance expansion.
struct KernelFunctionals
{
  double moment2 = 0.0;       //!< int u^2 w(u) du
  double sq_norm = 0.0;       //!< int w(u)^2 du
  double deriv_sq_norm = 0.0; //!< int w'(u)^2 du
};

/// Symmetric probability density on [-1, 1] with a continuous derivative.
///
/// Immutable after construction. Kernels obtained from biweight() or
/// make_kernel() have passed check_condition_w(); a hand-assembled record
/// has not, and is only meant for diagnostics such as kernel_functionals().
struct Kernel
{
  std::string name;
  RealFn eval;
  RealFn deriv;
  RealFn second_deriv; //!< optional, needed for q'' estimation only
  KernelFunctionals functionals;
  KernelShape shape = KernelShape::custom;

  double operator()(double u) const { return eval(u); }
  bool has_second_deriv() const { return static_cast<bool>(second_deriv); }
  double moment2() const { return functionals.moment2; }
  double sq_norm() const { return functionals.sq_norm; }
  double deriv_sq_norm() const { return functionals.deriv_sq_norm; }
};

//! w(u) = 15/16 (1 - u^2)^2 on [-1, 1].
Kernel biweight();

//! Functionals by adaptive quadrature. Throws ValidationError when w does not
//! integrate to one within 1e-6.
KernelFunctionals kernel_functionals(const Kernel& k);

struct ConditionWReport
{
  bool nonnegative = true;
  bool compact_support = true;
  bool symmetric = true;
  bool normalized = true;
  bool derivative_consistent = true; //!< deriv matches finite differences of eval
  bool derivative_continuous = true;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

ConditionWReport check_condition_w(const Kernel& k);

//! Validated user kernel. Throws ValidationError listing every violation.
Kernel make_kernel(std::string name, RealFn eval, RealFn deriv, RealFn second_deriv = {});

//! Built-in kernels by name; only "biweight" ships.
Kernel kernel_by_name(std::string_view name);

/// Raw sums of w, w', w'' at u_i = (x - v_i)/h over the data (not normalized
/// by n or h). Biweight goes through the SIMD dispatch. For a custom kernel
/// without w'' the `second` field is NaN.
simd::KernelSums kernel_sums(const Kernel& k, std::span<const double> v, double x, double h);

simd::KernelSums kernel_sums(const Kernel& k,
                             std::span<const double> v,
                             std::span<const double> weights,
                             double x,
                             double h);

//! Index range [first, last) of ascending `sorted` with |x - v| <= h.
struct Window
{
  std::size_t first = 0;
  std::size_t last = 0;
};
Window kernel_window(std::span<const double> sorted, double x, double h);

} // namespace cskde
