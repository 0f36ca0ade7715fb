#include "cskde/q_estimation.hpp"

#include "cskde/cdf.hpp"
#include "cskde/density.hpp"
#include "cskde/errors.hpp"
#include "cskde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace cskde {

namespace {

void require_htilde(double htilde)
{
  if (!(htilde > 0.0) || !std::isfinite(htilde))
    throw ValidationError("htilde must be positive and finite");
}

} // namespace

double q_hat(std::span<const double> T, double htilde, const Kernel& k, double x)
{
  require_htilde(htilde);
  if (T.empty())
    throw ValidationError("q_hat needs at least one observation time");
  const auto s = kernel_sums(k, T, x, htilde);
  return s.value / (static_cast<double>(T.size()) * htilde);
}

QDerivatives q_hat_derivs(std::span<const double> T, double htilde, const Kernel& k, double x)
{
  require_htilde(htilde);
  if (T.empty())
    throw ValidationError("q_hat_derivs needs at least one observation time");
  if (!k.has_second_deriv())
    throw CapabilityError("kernel '" + k.name + "' has no second derivative; q'' cannot be estimated");
  const auto s = kernel_sums(k, T, x, htilde);
  const double nh = static_cast<double>(T.size()) * htilde;
  return { s.deriv / (nh * htilde), s.second / (nh * htilde * htilde) };
}

ObservationDensity estimated_density(std::vector<double> T, double htilde, const Kernel& k)
{
  require_htilde(htilde);
  if (T.empty())
    throw ValidationError("estimated_density needs at least one observation time");
  std::sort(T.begin(), T.end());
  auto data = std::make_shared<const std::vector<double>>(std::move(T));
  auto kernel = std::make_shared<const Kernel>(k);
  const double n = static_cast<double>(data->size());

  auto sums = [data, kernel, htilde](double x) {
    const std::span<const double> v = *data;
    const auto win = kernel_window(v, x, htilde);
    return kernel_sums(*kernel, v.subspan(win.first, win.last - win.first), x, htilde);
  };
  RealFn q = [sums, n, htilde](double x) { return sums(x).value / (n * htilde); };
  RealFn d1 = [sums, n, htilde](double x) { return sums(x).deriv / (n * htilde * htilde); };
  RealFn d2;
  if (k.has_second_deriv())
    d2 = [sums, n, htilde](double x) { return sums(x).second / (n * htilde * htilde * htilde); };

  std::ostringstream desc;
  desc << "estimate:" << htilde;
  return ObservationDensity(
    DensityMode::estimated, std::move(q), std::move(d1), std::move(d2), {}, desc.str(), htilde);
}

double normal_reference_htilde(double sd, std::size_t n, const Kernel& k)
{
  const double mu2 = k.moment2();
  const double c = 16.0 * std::sqrt(std::numbers::pi) * k.deriv_sq_norm() / (5.0 * mu2 * mu2);
  return sd * std::pow(c / static_cast<double>(n), 1.0 / 7.0);
}

double normal_reference_level(double sd, std::size_t n, const Kernel& k)
{
  const double mu2 = k.moment2();
  const double c = 8.0 * std::sqrt(std::numbers::pi) * k.sq_norm() / (3.0 * mu2 * mu2);
  return sd * std::pow(c / static_cast<double>(n), 0.2);
}

namespace {

double checked_sd(std::span<const double> T)
{
  const double sd = sample_sd(T);
  if (!(sd > 0.0))
    throw ValidationError("observation times have zero spread; a reference bandwidth is undefined");
  return sd;
}

} // namespace

double default_htilde(std::span<const double> T, const Kernel& k)
{
  return normal_reference_htilde(checked_sd(T), T.size(), k);
}

double default_moment_htilde(std::span<const double> T, const Kernel& k)
{
  return normal_reference_level(checked_sd(T), T.size(), k);
}

std::optional<std::string> htilde_scaling_warning(double htilde,
                                                  std::span<const double> T,
                                                  const Kernel& k)
{
  const double ref = default_htilde(T, k);
  const double ratio = htilde / ref;
  if (ratio >= 0.2 && ratio <= 5.0)
    return std::nullopt;
  std::ostringstream msg;
  msg << "htilde = " << htilde << " is " << ratio
      << " times the n^(-1/7) normal-reference value " << ref;
  return msg.str();
}

double f_final_unknown_q(const CurrentStatusSample& s,
                         double h,
                         double htilde,
                         double h2,
                         const Kernel& k,
                         double x)
{
  s.validate();
  const auto V = transform(s);
  const auto q = estimated_density(s.times, htilde, k);
  const GEstimate g1(V, h, k);
  const CdfEstimate F(g1.with_bandwidth(h2), q, 0.5);
  return f_final(g1, q, F.as_function(), x);
}

} // namespace cskde
