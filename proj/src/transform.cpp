#include "cskde/transform.hpp"

#include "cskde/errors.hpp"
#include "cskde/observation_density.hpp"

#include <cmath>
#include <string>

namespace cskde {

void Support::validate() const
{
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw ValidationError("support needs finite a < b");
}

void CurrentStatusSample::validate() const
{
  support.validate();
  if (times.size() != statuses.size())
    throw ValidationError("times and statuses differ in length");
  if (times.empty())
    throw ValidationError("current status sample is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!support.contains(times[i]))
      throw ValidationError("observation time " + std::to_string(times[i]) + " at index " +
                            std::to_string(i) + " lies outside the support");
    if (statuses[i] > 1)
      throw ValidationError("status at index " + std::to_string(i) + " is not 0 or 1");
  }
}

TransformedSample transform(const CurrentStatusSample& s)
{
  s.validate();
  const double shift = s.support.width();
  TransformedSample out;
  out.support = s.support;
  out.values.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out.values[i] = s.statuses[i] == 1 ? s.times[i] : s.times[i] + shift;
  return out;
}

CurrentStatusSample untransform(const TransformedSample& v)
{
  CurrentStatusSample out;
  out.support = v.support;
  out.times.resize(v.size());
  out.statuses.resize(v.size());
  const double shift = v.shift();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool observed_event = v.values[i] <= v.support.b;
    out.statuses[i] = observed_event ? 1 : 0;
    out.times[i] = observed_event ? v.values[i] : v.values[i] - shift;
  }
  return out;
}

double true_g(double v, const RealFn& F, const ObservationDensity& q)
{
  if (v < 0.0 || v > 2.0)
    return 0.0;
  const auto cdf = [&](double x) { return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : F(x)); };
  return q.wrapped(v, 1.0) * (cdf(v) - cdf(v - 1.0));
}

} // namespace cskde
