#pragma once

#include "cskde/kernels.hpp"
#include "cskde/observation_density.hpp"
#include "cskde/transform.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cskde {

//! (1/(n htilde)) sum w((x - T_k)/htilde)
double q_hat(std::span<const double> T, double htilde, const Kernel& k, double x);

struct QDerivatives
{
  double d1 = 0.0;
  double d2 = 0.0;
};

//! Kernel estimates of q' and q''. Throws CapabilityError when k has no w''.
QDerivatives q_hat_derivs(std::span<const double> T, double htilde, const Kernel& k, double x);

/// q, q' and q'' as kernel estimates from the observation times. The
/// estimate is not floored or truncated; q''' is unavailable.
ObservationDensity estimated_density(std::vector<double> T, double htilde, const Kernel& k = biweight());

//! Normal-reference bandwidth for a first-derivative estimate, ~ sd n^(-1/7).
double normal_reference_htilde(double sd, std::size_t n, const Kernel& k = biweight());
//! Normal-reference bandwidth for a level estimate, ~ sd n^(-1/5).
double normal_reference_level(double sd, std::size_t n, const Kernel& k = biweight());

double default_htilde(std::span<const double> T, const Kernel& k = biweight());
//! Bandwidth of q_hat in the moment step of the reference bandwidth.
double default_moment_htilde(std::span<const double> T, const Kernel& k = biweight());

//! Message when htilde is off the n^(-1/7) normal-reference value by more than a factor 5.
std::optional<std::string> htilde_scaling_warning(double htilde,
                                                  std::span<const double> T,
                                                  const Kernel& k = biweight());

/// Final density estimator with q replaced by its kernel estimate, used both
/// in the inversion and in the plug-in F_hat (t = 1/2, bandwidth h2).
double f_final_unknown_q(const CurrentStatusSample& s,
                         double h,
                         double htilde,
                         double h2,
                         const Kernel& k,
                         double x);

} // namespace cskde
