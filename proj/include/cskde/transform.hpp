#pragma once

#include "cskde/quadrature.hpp"

#include <cstdint>
#include <vector>

namespace cskde {

class ObservationDensity;

//! Observation window [a, b], a < b.
struct Support
{
  double a = 0.0;
  double b = 1.0;

  double width() const { return b - a; }
  bool contains(double t) const { return t >= a && t <= b; }
  bool interior(double x) const { return x > a && x < b; }
  double to_unit(double x) const { return (x - a) / (b - a); }
  double from_unit(double u) const { return a + (b - a) * u; }

  void validate() const;
};

/// Current status observations (t_i, delta_i) with delta_i = 1{x_i <= t_i}.
struct CurrentStatusSample
{
  std::vector<double> times;
  std::vector<std::uint8_t> statuses;
  Support support;

  std::size_t size() const { return times.size(); }
  //! Throws ValidationError on length mismatch, empty data, t outside the
  //! support or a status other than 0/1.
  void validate() const;
};

/// v_i = t_i for delta_i = 1, v_i = t_i + (b - a) for delta_i = 0.
/// Values lie in [a, 2b - a]; order follows the source sample.
struct TransformedSample
{
  std::vector<double> values;
  Support support;

  std::size_t size() const { return values.size(); }
  double shift() const { return support.width(); }
};

TransformedSample transform(const CurrentStatusSample& s);

//! Inverse of transform(). v <= b maps back to delta = 1; the single
//! ambiguous record (t = a, delta = 0) collides with (t = b, delta = 1).
CurrentStatusSample untransform(const TransformedSample& v);

/// Density of V on the unit interval convention:
/// g(v) = (q(v) + q(v-1)) (F(v) - F(v-1)), zero off [0, 2]. F is the CDF
/// of X concentrated on [0, 1].
double true_g(double v, const RealFn& F, const ObservationDensity& q);

} // namespace cskde
