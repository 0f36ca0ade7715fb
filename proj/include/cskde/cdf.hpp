#pragma once

#include "cskde/density.hpp"

#include <string>
#include <vector>

namespace cskde {

/// Left, right and combined kernel estimators of the distribution function.
/// Estimates are never clamped to [0, 1].
class CdfEstimate
{
public:
  CdfEstimate(GEstimate g, ObservationDensity q, double t_rule = 0.5);

  const GEstimate& g() const { return g_; }
  const ObservationDensity& q() const { return q_; }
  double t_rule() const { return t_; }

  //! g_hat(x)/q(x); x in [a, b].
  double F_minus(double x) const;
  //! 1 - g_hat(x + L)/q(x)
  double F_plus(double x) const;
  double F_combined(double x) const;

  //! F_combined as a callable, for use as the plug-in weight of f_final.
  RealFn as_function() const;

private:
  GEstimate g_;
  ObservationDensity q_;
  double t_;
};

struct CouplingDiagnostics
{
  double h1_floor = 0.0;  //!< n^(-9/35), unit scale
  double h2_target = 0.0; //!< n^(-1/5), unit scale
  bool h1_ok = true;
  bool h2_ok = true;
  std::vector<std::string> warnings;
};

/// Diagnostics only: h1 should exceed n^(-9/35) and h2 should be within a
/// factor 3 of n^(-1/5). Bandwidths are divided by `width` first.
CouplingDiagnostics validate_bandwidth_coupling(double h1, double h2, std::size_t n, double width = 1.0);

} // namespace cskde
