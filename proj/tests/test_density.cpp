#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cskde/density.hpp"
#include "cskde/errors.hpp"
#include "cskde/expansion.hpp"
#include "cskde/simulation.hpp"
#include "oracle.hpp"

#include <cmath>
#include <vector>

using namespace cskde;

namespace {

GEstimate single(double v, double h)
{
  return GEstimate(TransformedSample{ { v }, { 0.0, 1.0 } }, h);
}

const ObservationDensity& uniform_q()
{
  static const ObservationDensity q = analytic_density(Family::uniform());
  return q;
}

} // namespace

TEST_CASE("g_hat on one or two data points")
{
  CHECK(g_hat(single(0.5, 0.1), 0.5) == doctest::Approx(9.375).epsilon(1e-14));
  CHECK(g_hat(single(0.5, 0.1), 0.7) == 0.0);
  const GEstimate two(TransformedSample{ { 0.25, 0.75 }, { 0.0, 1.0 } }, 0.25);
  CHECK(g_hat(two, 0.5) == 0.0);
}

TEST_CASE("g_hat_deriv on one data point and against finite differences")
{
  CHECK(g_hat_deriv(single(0.5, 0.1), 0.45) == doctest::Approx(140.625).epsilon(1e-12));
  CHECK(g_hat_deriv(single(0.5, 0.1), 0.5) == 0.0);

  ScenarioConfig cfg;
  cfg.n = 500;
  const GEstimate e(transform(generate_css(cfg, 0).sample), 0.2);
  for (const double x : { 0.13, 0.5, 0.91, 1.4 }) {
    const double fd = oracle::central_diff([&](double y) { return e.value(y); }, x, 1e-6);
    CHECK(std::abs(fd - e.deriv(x)) < 1e-4);
    const auto p = e.at(x);
    CHECK(p.g == e.value(x));
    CHECK(p.dg == e.deriv(x));
  }
}

TEST_CASE("g_hat integrates to one")
{
  ScenarioConfig cfg;
  cfg.n = 300;
  const GEstimate e(transform(generate_css(cfg, 1).sample), 0.15);
  const double mass = oracle::simpson([&](double x) { return e.value(x); }, -0.2, 2.2, 200000);
  CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("inversion estimators on single data points")
{
  CHECK(f_minus(single(0.5, 0.1), uniform_q(), 0.45) == doctest::Approx(140.625).epsilon(1e-12));
  CHECK(f_plus(single(1.5, 0.1), uniform_q(), 0.45) == doctest::Approx(-140.625).epsilon(1e-12));
  CHECK(f_plus(single(0.5, 0.1), uniform_q(), 0.5) == 0.0);
}

TEST_CASE("uniform q reduces to the uniform deconvolution estimators exactly")
{
  ScenarioConfig cfg;
  cfg.n = 2000;
  cfg.q_family = "uniform";
  const GEstimate e(transform(generate_css(cfg, 2).sample), 0.2);
  for (int i = 1; i < 400; ++i) {
    const double x = i / 400.0;
    CHECK(f_minus(e, uniform_q(), x) == e.deriv(x));
    CHECK(f_plus(e, uniform_q(), x) == -e.deriv(x + 1.0));
  }
}

TEST_CASE("f_combined is affine in t")
{
  ScenarioConfig cfg;
  cfg.n = 1000;
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const GEstimate e(transform(generate_css(cfg, 3).sample), 0.22);
  for (const double x : { 0.1, 0.5, 0.8 }) {
    const double fm = f_minus(e, q, x);
    const double fp = f_plus(e, q, x);
    CHECK(f_combined(e, q, x, 1.0) == fm);
    CHECK(f_combined(e, q, x, 0.0) == fp);
    for (const double t : { -0.5, 0.3, 0.5, 1.7 })
      CHECK(f_combined(e, q, x, t) == doctest::Approx(t * fm + (1 - t) * fp).epsilon(1e-14));
  }
}

TEST_CASE("optimal_t minimizes the variance weight")
{
  CHECK(optimal_t(0.5) == 0.5);
  CHECK(optimal_t(0.0) == 1.0);
  CHECK(optimal_t(1.2) == doctest::Approx(-0.2));
  for (const double F : { 0.1, 0.37, 0.5, 0.9 }) {
    double best_t = 0.0, best = 1e300;
    for (int i = 0; i <= 1000; ++i) {
      const double t = i / 1000.0;
      const double v = t * t * F + (1 - t) * (1 - t) * (1 - F);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    CHECK(std::abs(best_t - optimal_t(F)) <= 1e-3);
  }
}

TEST_CASE("f_final weights and clamping")
{
  ScenarioConfig cfg;
  cfg.n = 1000;
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const GEstimate e(transform(generate_css(cfg, 4).sample), 0.22);
  const double x = 0.3;
  CHECK(f_final(e, q, [](double) { return 0.0; }, x) == f_minus(e, q, x));
  CHECK(f_final(e, q, [](double) { return 1.0; }, x) == f_plus(e, q, x));
  const double unclamped = f_final(e, q, [](double) { return 1.3; }, x);
  CHECK(unclamped == doctest::Approx(-0.3 * f_minus(e, q, x) + 1.3 * f_plus(e, q, x)));
  CHECK(f_final(e, q, [](double) { return 1.3; }, x, { true }) == f_plus(e, q, x));
}

TEST_CASE("degenerate q and boundary points are rejected")
{
  const auto q = analytic_density(Family::beta(2, 2));
  const auto e = single(0.5, 0.1);
  CHECK_THROWS_AS(f_minus(e, q, 1e-10), DegenerateObservationDensity);
  try {
    f_plus(e, q, 1e-10);
  } catch (const DegenerateObservationDensity& err) {
    CHECK(err.x() == 1e-10);
    CHECK(err.q_value() < kQFloor);
  }
  CHECK_THROWS_AS(f_minus(e, uniform_q(), 0.0), ValidationError);
  CHECK_THROWS_AS(f_plus(e, uniform_q(), 1.0), ValidationError);
  CHECK_THROWS_AS(single(0.5, 0.0), ValidationError);
}

TEST_CASE("bandwidths of half the support width are flagged")
{
  CHECK_FALSE(single(0.5, 0.49).wide_bandwidth());
  CHECK(single(0.5, 0.5).wide_bandwidth());
  CHECK(single(0.5, 0.1).with_bandwidth(0.7).wide_bandwidth());
}

TEST_CASE("theoretical expansion with uniform q")
{
  const TheoreticalExpansion te(Family::beta(2, 2), uniform_q());
  for (const double x : { 0.1, 0.5, 0.77 }) {
    CHECK(te.b_minus(x) == doctest::Approx(-12.0));
    CHECK(te.b_plus(x) == doctest::Approx(-12.0));
    CHECK(te.reduced_bias(x) == doctest::Approx(-12.0));
    CHECK(te.var_const_minus(x) == doctest::Approx(oracle::beta22_cdf(x) * 15.0 / 7.0));
    CHECK(te.var_const_plus(x) == doctest::Approx((1 - oracle::beta22_cdf(x)) * 15.0 / 7.0));
  }
  CHECK(te.mean(0.5, 0.5, 0.2) == doctest::Approx(1.5 + 0.02 / 7.0 * -12.0));
}

TEST_CASE("explicit and g-derivative bias forms agree")
{
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  for (const char* spec : { "beta:2,2", "beta:3,1.5", "truncnorm:0.4,0.2" }) {
    const TheoreticalExpansion te(Family::parse(spec), q);
    for (double x = 0.05; x < 1.0; x += 0.05) {
      CHECK(std::abs(te.b_minus(x) - te.b_minus_via_g(x)) < 1e-8);
      CHECK(std::abs(te.b_plus(x) - te.b_plus_via_g(x)) < 1e-8);
      const double t = 1.0 - te.F(x);
      CHECK(te.reduced_bias(x) == doctest::Approx(te.bias(x, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Monte Carlo mean and variance of the inversion estimators")
{
  ScenarioConfig cfg;
  cfg.n = 10000;
  cfg.q_family = "uniform";
  constexpr int M = 1000;
  const double h = 0.2;
  const double nh3 = cfg.n * h * h * h;
  std::vector<double> fm05, fm[3], fp[3];
  const double xs[3] = { 0.4, 0.5, 0.6 };
  for (int r = 0; r < M; ++r) {
    const GEstimate e(transform(generate_css(cfg, r).sample), h);
    for (int j = 0; j < 3; ++j) {
      fm[j].push_back(f_minus(e, uniform_q(), xs[j]));
      fp[j].push_back(f_plus(e, uniform_q(), xs[j]));
    }
  }
  // mean at x = 0.5 over the first 500 replications
  fm05.assign(fm[1].begin(), fm[1].begin() + 500);
  const double se = std::sqrt(oracle::variance(fm05) / 500.0);
  CHECK(std::abs(oracle::mean(fm05) - 1.4657142857142857) < 3.0 * se);

  for (int j = 0; j < 3; ++j) {
    const double p = oracle::beta22_cdf(xs[j]);
    const double ratio = oracle::variance(fm[j]) / oracle::variance(fp[j]);
    CHECK(ratio == doctest::Approx(p / (1 - p)).epsilon(0.2));
  }

  const double mm = oracle::mean(fm[1]), mp = oracle::mean(fp[1]);
  double cov = 0.0;
  for (int r = 0; r < M; ++r)
    cov += (fm[1][r] - mm) * (fp[1][r] - mp);
  cov /= M - 1;
  const double smaller = std::min(oracle::variance(fm[1]), oracle::variance(fp[1]));
  CHECK(std::abs(cov) * nh3 < 0.1 * smaller * nh3);
}
