#include "cskde/cdf.hpp"

#include "cskde/errors.hpp"

#include <cmath>
#include <sstream>

namespace cskde {

CdfEstimate::CdfEstimate(GEstimate g, ObservationDensity q, double t_rule)
  : g_(std::move(g))
  , q_(std::move(q))
  , t_(t_rule)
{
  if (!(t_rule >= 0.0 && t_rule <= 1.0))
    throw ValidationError("t_rule must lie in [0, 1]");
}

namespace {

void require_closed(const Support& s, double x)
{
  if (!s.contains(x)) {
    std::ostringstream msg;
    msg << "evaluation point " << x << " is outside [" << s.a << ", " << s.b << "]";
    throw ValidationError(msg.str());
  }
}

} // namespace

double CdfEstimate::F_minus(double x) const
{
  require_closed(g_.support(), x);
  return g_.value(x) / detail::checked_q(q_, x);
}

double CdfEstimate::F_plus(double x) const
{
  require_closed(g_.support(), x);
  return 1.0 - g_.value(x + g_.shift()) / detail::checked_q(q_, x);
}

double CdfEstimate::F_combined(double x) const
{
  return t_ * F_minus(x) + (1.0 - t_) * F_plus(x);
}

RealFn CdfEstimate::as_function() const
{
  return [self = *this](double x) { return self.F_combined(x); };
}

CouplingDiagnostics validate_bandwidth_coupling(double h1, double h2, std::size_t n, double width)
{
  if (!(h1 > 0.0) || !(h2 > 0.0) || n == 0 || !(width > 0.0))
    throw ValidationError("bandwidth coupling needs positive h1, h2, width and n");
  CouplingDiagnostics d;
  const double dn = static_cast<double>(n);
  d.h1_floor = std::pow(dn, -9.0 / 35.0);
  d.h2_target = std::pow(dn, -0.2);
  const double u1 = h1 / width;
  const double u2 = h2 / width;
  d.h1_ok = u1 >= d.h1_floor;
  d.h2_ok = u2 >= d.h2_target / 3.0 && u2 <= 3.0 * d.h2_target;
  if (!d.h1_ok) {
    std::ostringstream msg;
    msg << "h1 = " << h1 << " is below n^(-9/35) = " << d.h1_floor * width
        << "; the plug-in weight may not be accurate enough";
    d.warnings.push_back(msg.str());
  }
  if (!d.h2_ok) {
    std::ostringstream msg;
    msg << "h2 = " << h2 << " is not within a factor 3 of n^(-1/5) = " << d.h2_target * width;
    d.warnings.push_back(msg.str());
  }
  return d;
}

} // namespace cskde
