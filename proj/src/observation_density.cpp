#include "cskde/observation_density.hpp"

#include "cskde/errors.hpp"

#include <cmath>
#include <sstream>

namespace cskde {

ObservationDensity::ObservationDensity(DensityMode mode,
                                       RealFn q,
                                       RealFn d1,
                                       RealFn d2,
                                       RealFn d3,
                                       std::string description,
                                       double htilde)
  : mode_(mode)
  , q_(std::move(q))
  , d1_(std::move(d1))
  , d2_(std::move(d2))
  , d3_(std::move(d3))
  , description_(std::move(description))
  , htilde_(htilde)
{
  if (!q_ || !d1_)
    throw ValidationError("observation density needs q and q'");
}

double ObservationDensity::d2(double x) const
{
  if (!d2_)
    throw CapabilityError("q'' is not available for " + description_);
  return d2_(x);
}

double ObservationDensity::d3(double x) const
{
  if (!d3_)
    throw CapabilityError("q''' is not available for " + description_);
  return d3_(x);
}

ObservationDensity analytic_density(const Family& unit_family, Support support)
{
  support.validate();
  const double a = support.a;
  const double len = support.width();
  auto deriv = [unit_family, a, len](int k) -> RealFn {
    const double scale = std::pow(len, -(k + 1));
    return [unit_family, a, len, k, scale](double x) {
      return scale * unit_family.derivative((x - a) / len, k);
    };
  };
  std::ostringstream desc;
  desc << unit_family.spec();
  if (a != 0.0 || len != 1.0)
    desc << " on [" << support.a << ", " << support.b << "]";
  return ObservationDensity(
    DensityMode::analytic, deriv(0), deriv(1), deriv(2), deriv(3), desc.str());
}

ObservationDensity parse_observation_density(std::string_view spec, Support support)
{
  support.validate();
  auto family = Family::parse(spec);
  // location and scale of the truncated normal are in the units of the support
  if (const auto* tn = family.as_truncnorm(); tn && (support.a != 0.0 || support.b != 1.0))
    family = Family::truncnorm(support.to_unit(tn->mu()), tn->sigma() / support.width());
  return analytic_density(family, support);
}

ObservationDensity rescale_to_unit(const ObservationDensity& q, Support support)
{
  const double a = support.a;
  const double len = support.width();
  auto scaled = [q, a, len](int k) -> RealFn {
    const double scale = std::pow(len, k + 1);
    switch (k) {
      case 0:
        return [q, a, len, scale](double u) { return scale * q.value(a + len * u); };
      case 1:
        return [q, a, len, scale](double u) { return scale * q.d1(a + len * u); };
      case 2:
        return [q, a, len, scale](double u) { return scale * q.d2(a + len * u); };
      default:
        return [q, a, len, scale](double u) { return scale * q.d3(a + len * u); };
    }
  };
  return ObservationDensity(q.mode(),
                            scaled(0),
                            scaled(1),
                            scaled(2),
                            q.has_d3() ? scaled(3) : RealFn{},
                            q.description(),
                            q.htilde() / len);
}

} // namespace cskde
