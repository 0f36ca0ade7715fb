#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cskde {

using Engine = std::mt19937_64;

//! Beta(alpha, beta) on [0, 1]; Beta(1, 1) is the uniform density.
class BetaDistribution
{
public:
  BetaDistribution(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double pdf(double x) const { return derivative(x, 0); }
  //! k-th derivative of the density, k in 0..3, closed form; 0 off [0, 1].
  double derivative(double x, int order) const;
  double cdf(double x) const;
  double mean() const;
  double variance() const;

  double draw(Engine& eng) const;
  //! n draws; uniform for (1, 1), otherwise a ratio of gamma variates.
  std::vector<double> sample(std::size_t n, Engine& eng) const;

private:
  double alpha_;
  double beta_;
  double log_norm_; // -log B(alpha, beta)
};

//! Normal(mu, sigma^2) conditioned on [lo, hi].
class TruncatedNormal
{
public:
  TruncatedNormal(double mu, double sigma, double lo = 0.0, double hi = 1.0);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double pdf(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;
  double cdf(double x) const;
  //! Probability mass of the untruncated normal inside [lo, hi].
  double acceptance() const { return mass_; }
  double mean() const;

  //! Rejection sampling; throws ValidationError when acceptance < 1e-6.
  double draw(Engine& eng) const;
  std::vector<double> sample(std::size_t n, Engine& eng) const;

private:
  double mu_, sigma_, lo_, hi_;
  double mass_;
};

/// Parametric family on the unit interval, parsed from specs such as
/// "uniform", "beta:2,2" or "truncnorm:0.5,0.3".
class Family
{
public:
  static Family parse(std::string_view spec);
  static Family uniform() { return Family(BetaDistribution(1.0, 1.0), "uniform"); }
  static Family beta(double a, double b);
  static Family truncnorm(double mu, double sigma);

  const std::string& spec() const { return spec_; }
  bool is_beta() const { return std::holds_alternative<BetaDistribution>(dist_); }
  const BetaDistribution* as_beta() const { return std::get_if<BetaDistribution>(&dist_); }
  const TruncatedNormal* as_truncnorm() const { return std::get_if<TruncatedNormal>(&dist_); }

  double pdf(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;
  double cdf(double x) const;
  double mean() const;
  double draw(Engine& eng) const;
  std::vector<double> sample(std::size_t n, Engine& eng) const;

private:
  template<class D>
  Family(D d, std::string spec)
    : dist_(std::move(d))
    , spec_(std::move(spec))
  {
  }

  std::variant<BetaDistribution, TruncatedNormal> dist_;
  std::string spec_;
};

//! Seed for the substream labelled `label` of replication `rep`.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t rep, std::string_view label);

//! n i.i.d. Beta draws, deterministic given seed.
std::vector<double> sample_beta(double alpha, double beta, std::size_t n, std::uint64_t seed);

//! n i.i.d. truncated-normal draws on [0, 1] by rejection.
std::vector<double> sample_truncnorm(double mu, double sigma, std::size_t n, std::uint64_t seed);

} // namespace cskde
