#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cskde {

/// Density values below this are never divided by.
inline constexpr double kQFloor = 1e-8;

//! Invalid argument or violated type invariant (bad kernel, bad config).
class ValidationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! An inversion estimator was asked to divide by q(x) <= kQFloor.
class DegenerateObservationDensity : public std::domain_error
{
public:
  DegenerateObservationDensity(double x, double qx);
  DegenerateObservationDensity(std::string what, std::vector<std::size_t> indices);

  double x() const { return x_; }
  double q_value() const { return qx_; }
  //! Sample indices with degenerate weights (moment estimation only).
  const std::vector<std::size_t>& indices() const { return indices_; }

private:
  double x_ = 0.0;
  double qx_ = 0.0;
  std::vector<std::size_t> indices_;
};

//! Method-of-moments Beta fit has no admissible solution.
class BetaFitInfeasible : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! The squared-bias functional vanishes so the AMISE minimizer is undefined.
class DegenerateBandwidth : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! Kernel lacks an optional derivative required by the caller.
class CapabilityError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

//! Malformed input data; carries the 1-based line numbers at fault.
class DataError : public std::runtime_error
{
public:
  DataError(std::string what, std::vector<std::size_t> lines = {})
    : std::runtime_error(std::move(what))
    , lines_(std::move(lines))
  {
  }
  const std::vector<std::size_t>& lines() const { return lines_; }

private:
  std::vector<std::size_t> lines_;
};

} // namespace cskde
