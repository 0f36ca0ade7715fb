#pragma once

#include <span>

namespace cskde {

double sample_mean(std::span<const double> x);
//! Unbiased (n - 1) sample variance, two-pass.
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);
//! Moment-ratio skewness m3 / m2^(3/2).
double skewness(std::span<const double> x);
//! m4 / m2^2 - 3
double excess_kurtosis(std::span<const double> x);
double sample_covariance(std::span<const double> x, std::span<const double> y);
double median(std::span<const double> x);

} // namespace cskde
