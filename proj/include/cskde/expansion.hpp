#pragma once

#include "cskde/distributions.hpp"
#include "cskde/kernels.hpp"
#include "cskde/observation_density.hpp"

namespace cskde {

/// Leading-order bias and variance of the inversion estimators for a known
/// event distribution F and observation density q, both on [0, 1].
///
/// Bias functions are the coefficients of h^2 mu_2 / 2, variance constants
/// the coefficients of 1/(n h^3) (density) or 1/(n h) (distribution function).
/// Only reduced_bias() and the variance constants are available when q has no
/// third derivative.
class TheoreticalExpansion
{
public:
  TheoreticalExpansion(Family f_family,
                       ObservationDensity q,
                       KernelFunctionals kernel = biweight().functionals);

  const Family& family() const { return f_; }
  const ObservationDensity& observation_density() const { return q_; }
  const KernelFunctionals& kernel() const { return k_; }

  double F(double x) const { return f_.cdf(x); }
  double f(double x) const { return f_.derivative(x, 0); }

  //! b- from the explicit q, f form.
  double b_minus(double x) const;
  double b_plus(double x) const;
  //! The same quantities through g'' and g''' of g = (q(v) + q(v-1))(F(v) - F(v-1)).
  double b_minus_via_g(double x) const;
  double b_plus_via_g(double x) const;

  //! t b-(x) + (1 - t) b+(x)
  double bias(double x, double t) const;
  //! The t = 1 - F(x) combination; needs q up to q'' only.
  double reduced_bias(double x) const;
  //! reduced_bias(x) - ratio^2 f(x) q''(x)/q(x), ratio = htilde/h.
  double unknown_q_bias(double x, double ratio) const;

  double var_const_minus(double x) const;
  double var_const_plus(double x) const;
  //! (t^2 F + (1-t)^2 (1-F)) int w'^2 / q
  double var_const(double x, double t) const;

  //! f(x) + h^2/2 mu_2 bias(x, t)
  double mean(double x, double t, double h) const;
  double variance(double x, double t, double n, double h) const;

  //! g''(x) and g''(x+1) for x in (0, 1).
  double g2_left(double x) const;
  double g2_right(double x) const;
  //! (t g''(x) - (1-t) g''(x+1)) / q(x)
  double cdf_bias(double x, double t) const;
  //! (t^2 F + (1-t)^2 (1-F)) int w^2 / q
  double cdf_var_const(double x, double t) const;
  double cdf_mean(double x, double t, double h) const;
  double cdf_variance(double x, double t, double n, double h) const;

private:
  struct Local
  {
    double F, f, f1, f2;
    double q, q1, q2;
  };
  Local local(double x) const;

  Family f_;
  ObservationDensity q_;
  KernelFunctionals k_;
};

} // namespace cskde
