#include "cskde/expansion.hpp"

namespace cskde {

TheoreticalExpansion::TheoreticalExpansion(Family f_family,
                                           ObservationDensity q,
                                           KernelFunctionals kernel)
  : f_(std::move(f_family))
  , q_(std::move(q))
  , k_(kernel)
{
}

TheoreticalExpansion::Local TheoreticalExpansion::local(double x) const
{
  return { f_.cdf(x),    f_.derivative(x, 0), f_.derivative(x, 1), f_.derivative(x, 2),
           q_.value(x), q_.d1(x),            q_.d2(x) };
}

double TheoreticalExpansion::b_minus(double x) const
{
  const auto l = local(x);
  const double q3 = q_.d3(x);
  const double num = l.q * q3 * l.F + 3.0 * l.q * l.q2 * l.f + 2.0 * l.q * l.q1 * l.f1 +
                     l.q * l.q * l.f2 - l.q1 * l.q2 * l.F - 2.0 * l.q1 * l.q1 * l.f;
  return num / (l.q * l.q);
}

double TheoreticalExpansion::b_plus(double x) const
{
  const auto l = local(x);
  const double q3 = q_.d3(x);
  const double num = -l.q * q3 * (1.0 - l.F) + 3.0 * l.q * l.q2 * l.f + 2.0 * l.q * l.q1 * l.f1 +
                     l.q * l.q * l.f2 + l.q1 * l.q2 * (1.0 - l.F) - 2.0 * l.q1 * l.q1 * l.f;
  return num / (l.q * l.q);
}

double TheoreticalExpansion::b_minus_via_g(double x) const
{
  const auto l = local(x);
  const double q3 = q_.d3(x);
  // g = q F on (0, 1)
  const double g2 = l.q2 * l.F + 2.0 * l.q1 * l.f + l.q * l.f1;
  const double g3 = q3 * l.F + 3.0 * l.q2 * l.f + 3.0 * l.q1 * l.f1 + l.q * l.f2;
  return g3 / l.q - l.q1 * g2 / (l.q * l.q);
}

double TheoreticalExpansion::b_plus_via_g(double x) const
{
  const auto l = local(x);
  const double q3 = q_.d3(x);
  // g(x + 1) = q(x) (1 - F(x))
  const double S = 1.0 - l.F;
  const double g2 = l.q2 * S - 2.0 * l.q1 * l.f - l.q * l.f1;
  const double g3 = q3 * S - 3.0 * l.q2 * l.f - 3.0 * l.q1 * l.f1 - l.q * l.f2;
  return -g3 / l.q + l.q1 * g2 / (l.q * l.q);
}

double TheoreticalExpansion::bias(double x, double t) const
{
  return t * b_minus(x) + (1.0 - t) * b_plus(x);
}

double TheoreticalExpansion::reduced_bias(double x) const
{
  const auto l = local(x);
  const double num = 3.0 * l.q * l.q2 * l.f + 2.0 * l.q * l.q1 * l.f1 + l.q * l.q * l.f2 -
                     2.0 * l.q1 * l.q1 * l.f;
  return num / (l.q * l.q);
}

double TheoreticalExpansion::unknown_q_bias(double x, double ratio) const
{
  return reduced_bias(x) - ratio * ratio * f(x) * q_.d2(x) / q_.value(x);
}

double TheoreticalExpansion::var_const_minus(double x) const
{
  return F(x) * k_.deriv_sq_norm / q_.value(x);
}

double TheoreticalExpansion::var_const_plus(double x) const
{
  return (1.0 - F(x)) * k_.deriv_sq_norm / q_.value(x);
}

double TheoreticalExpansion::var_const(double x, double t) const
{
  const double Fx = F(x);
  return (t * t * Fx + (1.0 - t) * (1.0 - t) * (1.0 - Fx)) * k_.deriv_sq_norm / q_.value(x);
}

double TheoreticalExpansion::mean(double x, double t, double h) const
{
  return f(x) + 0.5 * h * h * k_.moment2 * bias(x, t);
}

double TheoreticalExpansion::variance(double x, double t, double n, double h) const
{
  return var_const(x, t) / (n * h * h * h);
}

double TheoreticalExpansion::g2_left(double x) const
{
  const auto l = local(x);
  return l.q2 * l.F + 2.0 * l.q1 * l.f + l.q * l.f1;
}

double TheoreticalExpansion::g2_right(double x) const
{
  const auto l = local(x);
  return l.q2 * (1.0 - l.F) - 2.0 * l.q1 * l.f - l.q * l.f1;
}

double TheoreticalExpansion::cdf_bias(double x, double t) const
{
  return (t * g2_left(x) - (1.0 - t) * g2_right(x)) / q_.value(x);
}

double TheoreticalExpansion::cdf_var_const(double x, double t) const
{
  const double Fx = F(x);
  return (t * t * Fx + (1.0 - t) * (1.0 - t) * (1.0 - Fx)) * k_.sq_norm / q_.value(x);
}

double TheoreticalExpansion::cdf_mean(double x, double t, double h) const
{
  return F(x) + 0.5 * h * h * k_.moment2 * cdf_bias(x, t);
}

double TheoreticalExpansion::cdf_variance(double x, double t, double n, double h) const
{
  return cdf_var_const(x, t) / (n * h);
}

} // namespace cskde
