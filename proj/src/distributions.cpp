#include "cskde/distributions.hpp"

#include "cskde/errors.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cskde {

namespace {

// falling factorial p (p-1) ... (p-j+1)
double falling(double p, int j)
{
  double r = 1.0;
  for (int i = 0; i < j; ++i)
    r *= p - i;
  return r;
}

double binom(int k, int j)
{
  static constexpr double table[4][4] = {
    { 1, 0, 0, 0 }, { 1, 1, 0, 0 }, { 1, 2, 1, 0 }, { 1, 3, 3, 1 }
  };
  return table[k][j];
}

double normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

std::vector<double> parse_numbers(std::string_view text, std::string_view spec)
{
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto tok = text.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw ValidationError("bad number '" + std::string(tok) + "' in family spec '" +
                            std::string(spec) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_spec(std::string_view name, double a, double b)
{
  std::ostringstream os;
  os.precision(17);
  os << name << ':' << a << ',' << b;
  return os.str();
}

} // namespace

// ---------------------------------------------------------------- Beta

BetaDistribution::BetaDistribution(double alpha, double beta)
  : alpha_(alpha)
  , beta_(beta)
{
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw ValidationError("Beta parameters must be finite and positive");
  log_norm_ = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
}

double BetaDistribution::derivative(double x, int order) const
{
  if (x < 0.0 || x > 1.0)
    return 0.0;
  // Leibniz rule on x^p (1-x)^r
  const double p = alpha_ - 1.0;
  const double r = beta_ - 1.0;
  double total = 0.0;
  for (int j = 0; j <= order; ++j) {
    const double cp = falling(p, j);
    const double cr = falling(r, order - j);
    if (cp == 0.0 || cr == 0.0)
      continue;
    const double sign = ((order - j) % 2 == 0) ? 1.0 : -1.0;
    total += binom(order, j) * cp * cr * sign * std::pow(x, p - j) *
             std::pow(1.0 - x, r - (order - j));
  }
  return std::exp(log_norm_) * total;
}

double BetaDistribution::cdf(double x) const
{
  if (x <= 0.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  return boost::math::ibeta(alpha_, beta_, x);
}

double BetaDistribution::mean() const
{
  return alpha_ / (alpha_ + beta_);
}

double BetaDistribution::variance() const
{
  const double s = alpha_ + beta_;
  return alpha_ * beta_ / (s * s * (s + 1.0));
}

double BetaDistribution::draw(Engine& eng) const
{
  return sample(1, eng).front();
}

std::vector<double> BetaDistribution::sample(std::size_t n, Engine& eng) const
{
  std::vector<double> out(n);
  if (alpha_ == 1.0 && beta_ == 1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : out)
      v = u(eng);
    return out;
  }
  std::gamma_distribution<double> ga(alpha_, 1.0);
  std::gamma_distribution<double> gb(beta_, 1.0);
  for (auto& v : out) {
    const double a = ga(eng);
    const double b = gb(eng);
    v = a / (a + b);
  }
  return out;
}

// ---------------------------------------------------------------- truncated normal

TruncatedNormal::TruncatedNormal(double mu, double sigma, double lo, double hi)
  : mu_(mu)
  , sigma_(sigma)
  , lo_(lo)
  , hi_(hi)
{
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma))
    throw ValidationError("truncated normal needs finite mu and sigma > 0");
  if (!(hi > lo))
    throw ValidationError("truncated normal needs lo < hi");
  mass_ = normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma);
}

double TruncatedNormal::derivative(double x, int order) const
{
  if (x < lo_ || x > hi_ || mass_ <= 0.0)
    return 0.0;
  const double z = (x - mu_) / sigma_;
  const double base = std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma_ * mass_);
  // Hermite polynomials: phi^(k)(z) = (-1)^k He_k(z) phi(z)
  switch (order) {
    case 0:
      return base;
    case 1:
      return -z / sigma_ * base;
    case 2:
      return (z * z - 1.0) / (sigma_ * sigma_) * base;
    case 3:
      return -(z * z * z - 3.0 * z) / (sigma_ * sigma_ * sigma_) * base;
    default:
      throw ValidationError("truncated normal derivatives are available up to order 3");
  }
}

double TruncatedNormal::cdf(double x) const
{
  if (x <= lo_)
    return 0.0;
  if (x >= hi_)
    return 1.0;
  return (normal_cdf((x - mu_) / sigma_) - normal_cdf((lo_ - mu_) / sigma_)) / mass_;
}

double TruncatedNormal::mean() const
{
  const double a = (lo_ - mu_) / sigma_;
  const double b = (hi_ - mu_) / sigma_;
  const auto phi = [](double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  return mu_ + sigma_ * (phi(a) - phi(b)) / mass_;
}

double TruncatedNormal::draw(Engine& eng) const
{
  return sample(1, eng).front();
}

std::vector<double> TruncatedNormal::sample(std::size_t n, Engine& eng) const
{
  if (mass_ < 1e-6)
    throw ValidationError("truncated normal acceptance probability below 1e-6");
  std::normal_distribution<double> nd(mu_, sigma_);
  std::vector<double> out(n);
  for (auto& v : out) {
    double t = nd(eng);
    while (!(t >= lo_ && t <= hi_))
      t = nd(eng);
    v = t;
  }
  return out;
}

// ---------------------------------------------------------------- Family

Family Family::beta(double a, double b)
{
  return Family(BetaDistribution(a, b), format_spec("beta", a, b));
}

Family Family::truncnorm(double mu, double sigma)
{
  return Family(TruncatedNormal(mu, sigma), format_spec("truncnorm", mu, sigma));
}

Family Family::parse(std::string_view spec)
{
  const auto colon = spec.find(':');
  const auto name = spec.substr(0, colon);
  const auto args = colon == std::string_view::npos
                      ? std::vector<double>{}
                      : parse_numbers(spec.substr(colon + 1), spec);
  if (name == "uniform" && args.empty())
    return uniform();
  if (name == "beta" && args.size() == 2)
    return beta(args[0], args[1]);
  if (name == "truncnorm" && args.size() == 2)
    return truncnorm(args[0], args[1]);
  throw ValidationError("unknown family spec '" + std::string(spec) +
                        "' (expected uniform | beta:a,b | truncnorm:mu,sigma)");
}

double Family::derivative(double x, int order) const
{
  return std::visit([&](const auto& d) { return d.derivative(x, order); }, dist_);
}

double Family::cdf(double x) const
{
  return std::visit([&](const auto& d) { return d.cdf(x); }, dist_);
}

double Family::mean() const
{
  return std::visit([](const auto& d) { return d.mean(); }, dist_);
}

double Family::draw(Engine& eng) const
{
  return std::visit([&](const auto& d) { return d.draw(eng); }, dist_);
}

std::vector<double> Family::sample(std::size_t n, Engine& eng) const
{
  return std::visit([&](const auto& d) { return d.sample(n, eng); }, dist_);
}

// ---------------------------------------------------------------- seeding

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t rep, std::string_view label)
{
  // splitmix64 finalizer over (seed, rep, FNV-1a(label))
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix(mix(mix(master_seed) ^ rep) ^ h);
}

std::vector<double> sample_beta(double alpha, double beta, std::size_t n, std::uint64_t seed)
{
  Engine eng(seed);
  return Family::beta(alpha, beta).sample(n, eng);
}

std::vector<double> sample_truncnorm(double mu, double sigma, std::size_t n, std::uint64_t seed)
{
  Engine eng(seed);
  return Family::truncnorm(mu, sigma).sample(n, eng);
}

} // namespace cskde
