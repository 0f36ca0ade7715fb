#include "cskde/kernels.hpp"

#include "cskde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cskde {

Kernel biweight()
{
  Kernel k;
  k.name = "biweight";
  k.eval = [](double u) {
    if (std::abs(u) >= 1.0)
      return 0.0;
    const double a = 1.0 - u * u;
    return 15.0 / 16.0 * a * a;
  };
  k.deriv = [](double u) {
    if (std::abs(u) >= 1.0)
      return 0.0;
    return -15.0 / 4.0 * u * (1.0 - u * u);
  };
  // jumps at +-1; the open support convention gives 0 there
  k.second_deriv = [](double u) {
    if (std::abs(u) >= 1.0)
      return 0.0;
    return -15.0 / 4.0 * (1.0 - 3.0 * u * u);
  };
  k.functionals = { 1.0 / 7.0, 5.0 / 7.0, 15.0 / 7.0 };
  k.shape = KernelShape::biweight;
  return k;
}

KernelFunctionals kernel_functionals(const Kernel& k)
{
  const auto& w = k.eval;
  const auto& dw = k.deriv;
  const double mass = integrate(w, -1.0, 1.0, { 0.0 });
  if (!(std::abs(mass - 1.0) <= 1e-6)) {
    std::ostringstream msg;
    msg << "kernel '" << k.name << "' integrates to " << mass << ", not 1";
    throw ValidationError(msg.str());
  }
  KernelFunctionals out;
  out.moment2 = integrate([&](double u) { return u * u * w(u); }, -1.0, 1.0, { 0.0 });
  out.sq_norm = integrate([&](double u) { return w(u) * w(u); }, -1.0, 1.0, { 0.0 });
  out.deriv_sq_norm =
    integrate([&](double u) { return dw(u) * dw(u); }, -1.0, 1.0, { 0.0 });
  return out;
}

ConditionWReport check_condition_w(const Kernel& k)
{
  ConditionWReport rep;
  if (!k.eval || !k.deriv) {
    rep.problems.emplace_back("kernel needs both w and w'");
    rep.derivative_consistent = false;
    return rep;
  }

  constexpr int kPoints = 2000;
  for (int i = 0; i <= kPoints; ++i) {
    const double u = -1.0 + 2.0 * i / kPoints;
    const double wu = k.eval(u);
    if (wu < 0.0 || !std::isfinite(wu))
      rep.nonnegative = false;
    if (std::abs(wu - k.eval(-u)) > 1e-12)
      rep.symmetric = false;
  }
  for (const double u : { 1.0 + 1e-9, 1.001, 1.5, 2.0, 10.0 })
    if (k.eval(u) != 0.0 || k.eval(-u) != 0.0)
      rep.compact_support = false;

  const double mass = integrate(k.eval, -1.0, 1.0, { 0.0 });
  if (!(std::abs(mass - 1.0) <= 1e-10))
    rep.normalized = false;

  // w' against central differences of w at 100 interior points
  constexpr double kStep = 1e-5;
  for (int i = 1; i <= 100; ++i) {
    const double u = -1.0 + 2.0 * i / 101.0;
    const double fd = (k.eval(u + kStep) - k.eval(u - kStep)) / (2.0 * kStep);
    if (std::abs(fd - k.deriv(u)) > 1e-6)
      rep.derivative_consistent = false;
  }

  // a jump in w' larger than 0.05 between 1e-3-spaced points; the scan
  // overshoots the support so that w'(+-1) != 0 is also caught
  constexpr double kScan = 1e-3;
  double prev = k.deriv(-1.01);
  for (double u = -1.01 + kScan; u <= 1.01; u += kScan) {
    const double cur = k.deriv(u);
    if (std::abs(cur - prev) > 0.05)
      rep.derivative_continuous = false;
    prev = cur;
  }

  if (!rep.nonnegative)
    rep.problems.emplace_back("w takes negative or non-finite values");
  if (!rep.compact_support)
    rep.problems.emplace_back("w is not zero outside [-1, 1]");
  if (!rep.symmetric)
    rep.problems.emplace_back("w is not symmetric");
  if (!rep.normalized) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "w integrates to " << mass << " instead of 1";
    rep.problems.push_back(msg.str());
  }
  if (!rep.derivative_consistent)
    rep.problems.emplace_back("w' disagrees with finite differences of w");
  if (!rep.derivative_continuous)
    rep.problems.emplace_back("w' is not continuous on [-1, 1]");
  return rep;
}

Kernel make_kernel(std::string name, RealFn eval, RealFn deriv, RealFn second_deriv)
{
  Kernel k;
  k.name = std::move(name);
  k.eval = std::move(eval);
  k.deriv = std::move(deriv);
  k.second_deriv = std::move(second_deriv);
  const auto rep = check_condition_w(k);
  if (!rep.ok()) {
    std::string msg = "kernel '" + k.name + "' violates Condition W:";
    for (const auto& p : rep.problems)
      msg += " " + p + ";";
    throw ValidationError(msg);
  }
  k.functionals = kernel_functionals(k);
  return k;
}

Kernel kernel_by_name(std::string_view name)
{
  if (name == "biweight")
    return biweight();
  throw ValidationError("unknown kernel '" + std::string(name) + "' (available: biweight)");
}

simd::KernelSums kernel_sums(const Kernel& k, std::span<const double> v, double x, double h)
{
  if (k.shape == KernelShape::biweight)
    return simd::biweight_sums(v, x, 1.0 / h);

  const double inv_h = 1.0 / h;
  const bool second = k.has_second_deriv();
  simd::KernelSums s;
  for (const double vi : v) {
    const double u = (x - vi) * inv_h;
    if (std::abs(u) >= 1.0)
      continue;
    s.value += k.eval(u);
    s.deriv += k.deriv(u);
    if (second)
      s.second += k.second_deriv(u);
  }
  if (!second)
    s.second = std::numeric_limits<double>::quiet_NaN();
  return s;
}

simd::KernelSums kernel_sums(const Kernel& k,
                             std::span<const double> v,
                             std::span<const double> weights,
                             double x,
                             double h)
{
  if (k.shape == KernelShape::biweight)
    return simd::biweight_sums(v, weights, x, 1.0 / h);

  const double inv_h = 1.0 / h;
  const bool second = k.has_second_deriv();
  simd::KernelSums s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = (x - v[i]) * inv_h;
    if (std::abs(u) >= 1.0)
      continue;
    s.value += weights[i] * k.eval(u);
    s.deriv += weights[i] * k.deriv(u);
    if (second)
      s.second += weights[i] * k.second_deriv(u);
  }
  if (!second)
    s.second = std::numeric_limits<double>::quiet_NaN();
  return s;
}

Window kernel_window(std::span<const double> sorted, double x, double h)
{
  const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - h);
  const auto hi = std::upper_bound(lo, sorted.end(), x + h);
  return { static_cast<std::size_t>(lo - sorted.begin()),
           static_cast<std::size_t>(hi - sorted.begin()) };
}

} // namespace cskde
