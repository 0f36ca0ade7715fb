#pragma once

#include "cskde/distributions.hpp"
#include "cskde/quadrature.hpp"
#include "cskde/transform.hpp"

#include <string>
#include <string_view>

namespace cskde {

enum class DensityMode
{
  analytic,
  estimated
};

/// The observation-time density q with derivatives up to q'''.
///
/// Both modes expose the same callable interface so that every estimator
/// runs the same code path whether q is known or kernel-estimated. q and its
/// derivatives vanish outside the support in analytic mode; the estimated
/// mode is the raw kernel estimator and may spill past the endpoints.
class ObservationDensity
{
public:
  ObservationDensity(DensityMode mode,
                     RealFn q,
                     RealFn d1,
                     RealFn d2,
                     RealFn d3,
                     std::string description,
                     double htilde = 0.0);

  DensityMode mode() const { return mode_; }
  const std::string& description() const { return description_; }
  //! Bandwidth of the kernel estimate; 0 in analytic mode.
  double htilde() const { return htilde_; }

  double operator()(double x) const { return q_(x); }
  double value(double x) const { return q_(x); }
  double d1(double x) const { return d1_(x); }
  //! Throws CapabilityError when unavailable.
  double d2(double x) const;
  double d3(double x) const;
  bool has_d3() const { return static_cast<bool>(d3_); }

  //! q(v) + q(v - shift)
  double wrapped(double v, double shift) const { return q_(v) + q_(v - shift); }

private:
  DensityMode mode_;
  RealFn q_, d1_, d2_, d3_;
  std::string description_;
  double htilde_;
};

//! Analytic q on [a, b] from a unit-interval family: q(x) = f((x-a)/L)/L.
ObservationDensity analytic_density(const Family& unit_family, Support support = {});

/// "uniform", "beta:a,b" (shape parameters) or "truncnorm:mu,sigma" with mu
/// and sigma in the units of the support.
ObservationDensity parse_observation_density(std::string_view spec, Support support = {});

//! The same density expressed on [0, 1]: q_u(u) = L q(a + L u), derivatives
//! scaled by L^(k+1).
ObservationDensity rescale_to_unit(const ObservationDensity& q, Support support);

} // namespace cskde
