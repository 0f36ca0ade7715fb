#pragma once

#include "cskde/density.hpp"

#include <span>
#include <string>
#include <vector>

namespace cskde {

struct EstimatorConfig
{
  double h1 = 0.22;     //!< bandwidth of the density estimators
  double h2 = 0.16;     //!< bandwidth of the plug-in distribution function
  double t_rule = 0.5;  //!< fixed weight of the distribution-function estimator
  bool clamp_weight = false;
  //! Clip negative f_final to 0 and rescale to unit trapezoid mass on the grid.
  bool clip_negative = false;
  bool warp = false;
  double warp_fraction = 1.0 / 20.0;

  void validate() const;
};

//! `points` equispaced values on [a + 0.0025 L, b - 0.0025 L].
std::vector<double> default_grid(Support s = {}, std::size_t points = 401);

/// Every estimator on one grid. Where q(x) <= kQFloor all entries are NaN
/// and the grid index is listed in `degenerate`.
struct CurveSet
{
  std::vector<double> x;
  std::vector<double> f_minus, f_plus, f_final;
  std::vector<double> F_minus, F_plus, F_combined;
  std::vector<std::size_t> degenerate;
  std::vector<std::string> warnings;
};

/// Evaluates the curves point by point; grid points must lie inside (a, b).
/// Grid evaluation runs on parallel_for and is independent of the worker count.
CurveSet estimate_curves(const TransformedSample& V,
                         const ObservationDensity& q,
                         const Kernel& k,
                         const EstimatorConfig& cfg,
                         std::span<const double> grid);

//! Trapezoid integral of (est - truth)^2 over grid points in [lo, hi].
double integrated_squared_error(std::span<const double> x,
                                std::span<const double> est,
                                std::span<const double> truth,
                                double lo,
                                double hi);

} // namespace cskde
