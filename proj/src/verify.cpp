#include "cskde/verify.hpp"

#include "cskde/cdf.hpp"
#include "cskde/density.hpp"
#include "cskde/errors.hpp"
#include "cskde/expansion.hpp"
#include "cskde/parallel.hpp"
#include "cskde/q_estimation.hpp"
#include "cskde/simulation.hpp"
#include "cskde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace cskde {

std::string_view profile_name(Profile p)
{
  return p == Profile::quick ? "quick" : "full";
}

Profile parse_profile(std::string_view s)
{
  if (s == "full")
    return Profile::full;
  if (s == "quick")
    return Profile::quick;
  throw ValidationError("unknown profile '" + std::string(s) + "' (expected full | quick)");
}

bool VerificationReport::pass() const
{
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& theorem_names()
{
  static const std::vector<std::string> names = {
    "thm-variance", "thm-bias", "thm-normality", "thm-cdf", "thm-unknown-q"
  };
  return names;
}

namespace {

constexpr std::size_t kQuickN = 2000;
constexpr std::size_t kQuickReps = 200;
constexpr double kQuickSigmas = 4.0;

using Matrix = std::vector<std::vector<double>>;

class Harness
{
public:
  Harness(std::string theorem, const VerifyOptions& opts, std::size_t full_n, std::size_t full_reps)
    : opts_(opts)
  {
    report_.theorem = std::move(theorem);
    report_.profile = opts.profile;
    report_.seed = opts.seed;
    report_.n = opts.n.value_or(quick() ? kQuickN : full_n);
    report_.reps = opts.reps.value_or(quick() ? kQuickReps : full_reps);
    if (report_.n < 2 || report_.reps < 2)
      throw ValidationError("verification needs n >= 2 and at least two replications");
  }

  bool quick() const { return opts_.profile == Profile::quick; }
  std::size_t n() const { return report_.n; }
  std::size_t reps() const { return report_.reps; }
  std::uint64_t seed() const { return opts_.seed; }

  //! Stated tolerance, widened in the quick profile to cover Monte Carlo noise.
  double widen(double stated, double se) const
  {
    return quick() ? std::max(stated, kQuickSigmas * se) : stated;
  }

  void relative(std::string name, double observed, double predicted, double tol, double se)
  {
    const double t = widen(tol, std::abs(se / predicted));
    add({ std::move(name), "relative", observed, predicted, t, se,
          std::abs(observed / predicted - 1.0) <= t });
  }

  void abs_below(std::string name, double observed, double limit, double se)
  {
    const double t = widen(limit, se);
    add({ std::move(name), "abs_below", observed, 0.0, t, se, std::abs(observed) < t });
  }

  void below(std::string name, double observed, double limit, double se)
  {
    add({ std::move(name), "below", observed, limit, limit, se, observed < limit });
  }

  void range(std::string name, double observed, double target, double half_width, double se)
  {
    const double t = widen(half_width, se);
    add({ std::move(name), "range", observed, target, t, se, std::abs(observed - target) <= t });
  }

  void at_least(std::string name, double observed, double limit, double se)
  {
    add({ std::move(name), "at_least", observed, limit, limit, se, observed >= limit });
  }

  VerificationReport finish() { return std::move(report_); }

private:
  void add(CheckResult c) { report_.checks.push_back(std::move(c)); }

  VerifyOptions opts_;
  VerificationReport report_;
};

//! rows[rep] = fn(rep), in parallel, each row written by exactly one worker.
Matrix replicate(std::size_t reps, const std::function<std::vector<double>(std::size_t)>& fn)
{
  Matrix rows(reps);
  parallel_for(reps, [&](std::size_t rep) { rows[rep] = fn(rep); });
  return rows;
}

std::vector<double> column(const Matrix& rows, std::size_t j)
{
  std::vector<double> c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    c[i] = rows[i][j];
  return c;
}

std::vector<double> mix(const std::vector<double>& a, const std::vector<double>& b, double t)
{
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    c[i] = t * a[i] + (1.0 - t) * b[i];
  return c;
}

//! Standard error of a sample variance under normality.
double variance_se(double var, std::size_t reps)
{
  return var * std::sqrt(2.0 / static_cast<double>(reps - 1));
}

std::string at(const char* what, double x)
{
  std::ostringstream os;
  os << what << " x=" << x;
  return os.str();
}

ScenarioConfig scenario(std::size_t n, std::uint64_t seed, const char* f_family, const char* q_family)
{
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.master_seed = seed;
  cfg.f_family = f_family;
  cfg.q_family = q_family;
  return cfg;
}

constexpr const char* kBeta22 = "beta:2,2";
constexpr const char* kUniform = "uniform";
constexpr const char* kTruncnorm = "truncnorm:0.5,0.3";

VerificationReport thm_variance(const VerifyOptions& opts)
{
  Harness H("thm-variance", opts, 10000, 1000);
  const double h = 0.2;
  const std::vector<double> xs = { 0.25, 0.5, 0.75 };
  const auto cfg = scenario(H.n(), H.seed(), kBeta22, kUniform);
  const auto q = analytic_density(Family::uniform());
  const TheoreticalExpansion te(Family::beta(2, 2), q);

  const auto rows = replicate(H.reps(), [&](std::size_t rep) {
    const GEstimate g(transform(generate_css(cfg, rep).sample), h);
    std::vector<double> row;
    for (double x : xs) {
      row.push_back(f_minus(g, q, x));
      row.push_back(f_plus(g, q, x));
    }
    return row;
  });

  const double scale = static_cast<double>(H.n()) * h * h * h;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    const auto fm = column(rows, 2 * j);
    const auto fp = column(rows, 2 * j + 1);
    const struct
    {
      const char* label;
      double t;
    } weights[] = { { "f_minus", 1.0 }, { "f_plus", 0.0 }, { "f_t0.3", 0.3 }, { "f_optimal_t", 1.0 - te.F(x) } };
    for (const auto& w : weights) {
      const double v = scale * sample_variance(mix(fm, fp, w.t));
      H.relative(at(w.label, x) + " n*h^3*var", v, te.var_const(x, w.t), 0.15, variance_se(v, H.reps()));
    }
  }
  return H.finish();
}

VerificationReport thm_bias(const VerifyOptions& opts)
{
  Harness H("thm-bias", opts, 100000, 500);
  const double h = 0.3;
  const double x = 0.5;
  const double t = 0.5;
  const auto cfg = scenario(H.n(), H.seed(), kBeta22, kUniform);
  const auto q = analytic_density(Family::uniform());
  const double f = Family::beta(2, 2).pdf(x);

  const auto rows = replicate(H.reps(), [&](std::size_t rep) {
    const GEstimate g(transform(generate_css(cfg, rep).sample), h);
    return std::vector<double>{ f_combined(g, q, x, t), f_combined(g.with_bandwidth(0.5 * h), q, x, t) };
  });
  const auto a = column(rows, 0);
  const auto b = column(rows, 1);
  const double M = static_cast<double>(H.reps());
  const double b1 = sample_mean(a) - f;
  const double b2 = sample_mean(b) - f;
  const double ratio = b1 / b2;
  // delta method with the common-random-number covariance
  const double v1 = sample_variance(a) / M;
  const double v2 = sample_variance(b) / M;
  const double c12 = sample_covariance(a, b) / M;
  const double se =
    std::sqrt(std::max(0.0, v1 / (b2 * b2) + b1 * b1 * v2 / std::pow(b2, 4) - 2.0 * b1 * c12 / std::pow(b2, 3)));
  H.range("bias(h)/bias(h/2) x=0.5 t=0.5", ratio, 4.0, 1.0, se);
  return H.finish();
}

VerificationReport thm_normality(const VerifyOptions& opts)
{
  Harness H("thm-normality", opts, 10000, 1000);
  const double x = 0.5;
  const double h = std::pow(static_cast<double>(H.n()), -0.2);
  const auto cfg = scenario(H.n(), H.seed(), kBeta22, kTruncnorm);
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const TheoreticalExpansion te(Family::beta(2, 2), q);
  const Kernel k = biweight();

  const auto rows = replicate(H.reps(), [&](std::size_t rep) {
    const auto data = generate_css(cfg, rep);
    const GEstimate g(transform(data.sample), h, k);
    const auto g2 = g.with_bandwidth(h);
    const double fm = f_minus(g, q, x);
    const double fp = f_plus(g, q, x);
    const double F = CdfEstimate(g2, q).F_combined(x);
    const auto qh = estimated_density(data.sample.times, default_htilde(data.sample.times, k), k);
    const double fu = f_final(g, qh, CdfEstimate(g2, qh).as_function(), x);
    return std::vector<double>{ (1.0 - F) * fm + F * fp, 0.3 * fm + 0.7 * fp, fu };
  });

  const double M = static_cast<double>(H.reps());
  const auto final_ = column(rows, 0);
  const double v = static_cast<double>(H.n()) * h * h * h * sample_variance(final_);
  H.relative("f_final x=0.5 n*h^3*var", v, te.var_const(x, 1.0 - te.F(x)), 0.15, variance_se(v, H.reps()));
  const double skew_se = std::sqrt(6.0 / M);
  const double kurt_se = std::sqrt(24.0 / M);
  const char* labels[] = { "f_final", "f_t0.3", "f_final_unknown_q" };
  for (std::size_t j = 0; j < 3; ++j) {
    const auto c = column(rows, j);
    H.abs_below(std::string(labels[j]) + " x=0.5 skewness", skewness(c), 0.25, skew_se);
    H.abs_below(std::string(labels[j]) + " x=0.5 excess kurtosis", excess_kurtosis(c), 0.5, kurt_se);
  }
  return H.finish();
}

VerificationReport thm_cdf(const VerifyOptions& opts)
{
  Harness H("thm-cdf", opts, 10000, 1000);
  const double x = 0.5;
  {
    const double h = std::pow(static_cast<double>(H.n()), -0.2);
    const auto cfg = scenario(H.n(), H.seed(), kBeta22, kTruncnorm);
    const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
    const TheoreticalExpansion te(Family::beta(2, 2), q);
    const auto rows = replicate(H.reps(), [&](std::size_t rep) {
      const GEstimate g(transform(generate_css(cfg, rep).sample), h);
      return std::vector<double>{ CdfEstimate(g, q).F_combined(x) };
    });
    const double v = static_cast<double>(H.n()) * h * sample_variance(column(rows, 0));
    H.relative("F_half x=0.5 n*h*var", v, te.cdf_var_const(x, 0.5), 0.15, variance_se(v, H.reps()));
  }

  const std::size_t ladder[] = { 1000, 10000, 100000 };
  const auto q = analytic_density(Family::uniform());
  const double F = Family::beta(2, 2).cdf(x);
  double prev_mse = 0.0;
  double prev_se = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t n = ladder[i];
    const double h = std::pow(static_cast<double>(n), -0.2);
    const auto cfg = scenario(n, substream_seed(H.seed(), i, "cdf-ladder"), kBeta22, kUniform);
    const auto rows = replicate(H.reps(), [&](std::size_t rep) {
      const GEstimate g(transform(generate_css(cfg, rep).sample), h);
      const double e = CdfEstimate(g, q).F_combined(x) - F;
      return std::vector<double>{ e * e };
    });
    const auto sq = column(rows, 0);
    const double mse = sample_mean(sq);
    const double se = sample_sd(sq) / std::sqrt(static_cast<double>(H.reps()));
    if (i > 0) {
      std::ostringstream name;
      name << "F_half x=0.5 MSE(n=" << n << ")/MSE(n=" << ladder[i - 1] << ")";
      const double r = mse / prev_mse;
      H.below(name.str(), r, 1.0, r * std::hypot(se / mse, prev_se / prev_mse));
    }
    prev_mse = mse;
    prev_se = se;
  }
  return H.finish();
}

VerificationReport thm_unknown_q(const VerifyOptions& opts)
{
  Harness H("thm-unknown-q", opts, 100000, 100);
  const ScenarioConfig cfg = scenario(H.n(), H.seed(), kBeta22, kTruncnorm);
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const Kernel k = biweight();
  std::vector<double> grid;
  for (double x : default_grid())
    if (x >= 0.1 && x <= 0.9)
      grid.push_back(x);

  const auto rows = replicate(H.reps(), [&](std::size_t rep) {
    const auto data = generate_css(cfg, rep);
    const GEstimate g1(transform(data.sample), cfg.h1, k);
    const GEstimate g2 = g1.with_bandwidth(cfg.h2);
    const auto qh = estimated_density(data.sample.times, default_htilde(data.sample.times, k), k);
    double sup = 0.0;
    for (double x : grid) {
      const auto p1 = g1.at(x), p1s = g1.at(x + 1.0);
      const auto p2 = g2.at(x), p2s = g2.at(x + 1.0);
      auto final_with = [&](const ObservationDensity& qq) {
        const double qx = detail::checked_q(qq, x);
        const double q1 = qq.d1(x);
        const double F = 0.5 * (p2.g / qx) + 0.5 * (1.0 - p2s.g / qx);
        return (1.0 - F) * detail::invert_left(p1, qx, q1) + F * detail::invert_right(p1s, qx, q1);
      };
      sup = std::max(sup, std::abs(final_with(qh) - final_with(q)));
    }
    return std::vector<double>{ sup };
  });

  const auto sups = column(rows, 0);
  const double M = static_cast<double>(H.reps());
  const double frac = static_cast<double>(std::count_if(sups.begin(), sups.end(), [](double s) { return s < 0.1; })) / M;
  H.at_least("fraction of reps with sup|f_unknown_q - f_known_q| < 0.1 on [0.1,0.9]",
             frac,
             0.9,
             std::sqrt(std::max(frac * (1.0 - frac), 1.0 / M) / M));
  return H.finish();
}

} // namespace

VerificationReport verify_theorem(std::string_view name, const VerifyOptions& opts)
{
  if (name == "thm-variance")
    return thm_variance(opts);
  if (name == "thm-bias")
    return thm_bias(opts);
  if (name == "thm-normality")
    return thm_normality(opts);
  if (name == "thm-cdf")
    return thm_cdf(opts);
  if (name == "thm-unknown-q")
    return thm_unknown_q(opts);
  throw ValidationError("unknown check '" + std::string(name) +
                        "' (expected thm-variance | thm-bias | thm-normality | thm-cdf | thm-unknown-q | all)");
}

std::vector<VerificationReport> verify_all(const VerifyOptions& opts)
{
  std::vector<VerificationReport> out;
  for (const auto& name : theorem_names())
    out.push_back(verify_theorem(name, opts));
  return out;
}

} // namespace cskde
