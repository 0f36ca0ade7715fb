#include "cskde/density.hpp"

#include "cskde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cskde {

namespace {

std::shared_ptr<const TransformedSample> sorted_copy(TransformedSample data)
{
  std::sort(data.values.begin(), data.values.end());
  return std::make_shared<const TransformedSample>(std::move(data));
}

} // namespace

GEstimate::GEstimate(TransformedSample data, double h, Kernel kernel)
  : GEstimate(sorted_copy(std::move(data)),
              h,
              std::make_shared<const Kernel>(std::move(kernel)))
{
}

GEstimate::GEstimate(std::shared_ptr<const TransformedSample> data,
                     double h,
                     std::shared_ptr<const Kernel> kernel)
  : data_(std::move(data))
  , h_(h)
  , kernel_(std::move(kernel))
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw ValidationError("bandwidth must be positive and finite");
  if (data_->values.empty())
    throw ValidationError("cannot estimate from an empty sample");
  data_->support.validate();
}

GEstimate GEstimate::with_bandwidth(double h) const
{
  return GEstimate(data_, h, kernel_);
}

GEstimate::Point GEstimate::at(double x) const
{
  const std::span<const double> v = data_->values;
  const auto win = kernel_window(v, x, h_);
  const auto s = kernel_sums(*kernel_, v.subspan(win.first, win.last - win.first), x, h_);
  const double nh = static_cast<double>(size()) * h_;
  return { s.value / nh, s.deriv / (nh * h_) };
}

double GEstimate::value(double x) const
{
  return at(x).g;
}

double GEstimate::deriv(double x) const
{
  return at(x).dg;
}

double g_hat(const GEstimate& e, double x)
{
  return e.value(x);
}

double g_hat_deriv(const GEstimate& e, double x)
{
  return e.deriv(x);
}

namespace detail {

double checked_q(const ObservationDensity& q, double x)
{
  const double qx = q(x);
  if (!(qx > kQFloor))
    throw DegenerateObservationDensity(x, qx);
  return qx;
}

void require_interior(const Support& s, double x)
{
  if (!s.interior(x)) {
    std::ostringstream msg;
    msg << "evaluation point " << x << " is not inside (" << s.a << ", " << s.b << ")";
    throw ValidationError(msg.str());
  }
}

} // namespace detail

double f_minus(const GEstimate& e, const ObservationDensity& q, double x)
{
  detail::require_interior(e.support(), x);
  const double qx = detail::checked_q(q, x);
  return detail::invert_left(e.at(x), qx, q.d1(x));
}

double f_plus(const GEstimate& e, const ObservationDensity& q, double x)
{
  detail::require_interior(e.support(), x);
  const double qx = detail::checked_q(q, x);
  return detail::invert_right(e.at(x + e.shift()), qx, q.d1(x));
}

double f_combined(const GEstimate& e, const ObservationDensity& q, double x, double t)
{
  return t * f_minus(e, q, x) + (1.0 - t) * f_plus(e, q, x);
}

double f_final(const GEstimate& e,
               const ObservationDensity& q,
               const RealFn& F_hat,
               double x,
               FinalOptions opts)
{
  double Fx = F_hat(x);
  if (opts.clamp_weight)
    Fx = std::clamp(Fx, 0.0, 1.0);
  return f_combined(e, q, x, optimal_t(Fx));
}

DegenerateObservationDensity::DegenerateObservationDensity(double x, double qx)
  : std::domain_error([&] {
    std::ostringstream msg;
    msg << "observation density q(" << x << ") = " << qx << " is at or below the floor "
        << kQFloor;
    return msg.str();
  }())
  , x_(x)
  , qx_(qx)
{
}

DegenerateObservationDensity::DegenerateObservationDensity(std::string what,
                                                           std::vector<std::size_t> indices)
  : std::domain_error(std::move(what))
  , indices_(std::move(indices))
{
}

} // namespace cskde
