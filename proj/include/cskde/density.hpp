#pragma once

#include "cskde/kernels.hpp"
#include "cskde/observation_density.hpp"
#include "cskde/transform.hpp"

#include <memory>
#include <span>

namespace cskde {

/// Kernel estimate of the density g of the transformed sample, and of g'.
///
/// Holds the data sorted ascending behind a shared pointer, so each kernel
/// sum only visits the window |x - v| <= h; with_bandwidth() produces a
/// second estimate on the same data without copying it.
class GEstimate
{
public:
  GEstimate(TransformedSample data, double h, Kernel kernel = biweight());

  GEstimate with_bandwidth(double h) const;

  double bandwidth() const { return h_; }
  const Kernel& kernel() const { return *kernel_; }
  std::span<const double> values() const { return data_->values; }
  const Support& support() const { return data_->support; }
  double shift() const { return data_->shift(); }
  std::size_t size() const { return data_->size(); }

  //! Kernel windows around x and x + L overlap once h >= L/2; estimators stay
  //! computable but the disjoint-window asymptotics no longer apply.
  bool wide_bandwidth() const { return h_ >= 0.5 * shift(); }

  //! g_hat(x) = 1/(n h) sum w((x - v_i)/h)
  double value(double x) const;
  //! g_hat'(x) = 1/(n h^2) sum w'((x - v_i)/h)
  double deriv(double x) const;

  struct Point
  {
    double g = 0.0;
    double dg = 0.0;
  };
  //! value() and deriv() from a single pass over the data.
  Point at(double x) const;

private:
  GEstimate(std::shared_ptr<const TransformedSample> data,
            double h,
            std::shared_ptr<const Kernel> kernel);

  std::shared_ptr<const TransformedSample> data_;
  double h_;
  std::shared_ptr<const Kernel> kernel_;
};

double g_hat(const GEstimate& e, double x);
double g_hat_deriv(const GEstimate& e, double x);

/// Left estimator from data near x:
/// f-(x) = g'(x)/q(x) - q'(x) g(x)/q(x)^2. x must lie inside (a, b).
/// Throws DegenerateObservationDensity when q(x) <= kQFloor.
double f_minus(const GEstimate& e, const ObservationDensity& q, double x);

/// Right estimator from data near x + L:
/// f+(x) = -(g'(x+L)/q(x) - q'(x) g(x+L)/q(x)^2).
double f_plus(const GEstimate& e, const ObservationDensity& q, double x);

//! t f-(x) + (1 - t) f+(x); t is any real weight.
double f_combined(const GEstimate& e, const ObservationDensity& q, double x, double t);

//! Variance-minimizing weight 1 - F(x), passed through unclamped.
inline double optimal_t(double Fx)
{
  return 1.0 - Fx;
}

struct FinalOptions
{
  //! Clamp the plug-in F_hat(x) to [0, 1] before forming the weight.
  bool clamp_weight = false;
};

/// Final estimator (1 - F_hat(x)) f-(x) + F_hat(x) f+(x).
double f_final(const GEstimate& e,
               const ObservationDensity& q,
               const RealFn& F_hat,
               double x,
               FinalOptions opts = {});

namespace detail {

//! q(x) after the floor check; throws DegenerateObservationDensity.
double checked_q(const ObservationDensity& q, double x);
void require_interior(const Support& s, double x);

inline double invert_left(GEstimate::Point p, double qx, double q1x)
{
  return p.dg / qx - q1x * p.g / (qx * qx);
}

inline double invert_right(GEstimate::Point p_shifted, double qx, double q1x)
{
  return -(p_shifted.dg / qx - q1x * p_shifted.g / (qx * qx));
}

} // namespace detail

} // namespace cskde
