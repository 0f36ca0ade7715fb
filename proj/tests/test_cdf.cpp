#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cskde/cdf.hpp"
#include "cskde/errors.hpp"
#include "cskde/expansion.hpp"
#include "cskde/simulation.hpp"
#include "oracle.hpp"

#include <cmath>
#include <vector>

using namespace cskde;

namespace {

const ObservationDensity& uniform_q()
{
  static const ObservationDensity q = analytic_density(Family::uniform());
  return q;
}

CdfEstimate from_values(std::vector<double> v, double h, double t = 0.5)
{
  return CdfEstimate(GEstimate(TransformedSample{ std::move(v), { 0.0, 1.0 } }, h), uniform_q(), t);
}

} // namespace

TEST_CASE("empty kernel windows give the trivial estimates")
{
  const auto c = from_values({ 0.9 }, 0.1);
  CHECK(c.F_minus(0.3) == 0.0);
  CHECK(c.F_plus(0.3) == 1.0);
}

TEST_CASE("all data at x gives w(0)/h")
{
  const auto c = from_values(std::vector<double>(7, 0.4), 0.05);
  CHECK(c.F_minus(0.4) == doctest::Approx(0.9375 / 0.05).epsilon(1e-14));
}

TEST_CASE("F_combined is affine in t_rule and accepts the closed support")
{
  ScenarioConfig cfg;
  cfg.n = 2000;
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const GEstimate g(transform(generate_css(cfg, 0).sample), 0.16);
  const CdfEstimate c1(g, q, 1.0), c0(g, q, 0.0), ct(g, q, 0.3);
  for (const double x : { 0.0, 0.2, 0.5, 1.0 }) {
    CHECK(c1.F_combined(x) == c1.F_minus(x));
    CHECK(c0.F_combined(x) == c0.F_plus(x));
    CHECK(ct.F_combined(x) == doctest::Approx(0.3 * ct.F_minus(x) + 0.7 * ct.F_plus(x)).epsilon(1e-14));
  }
  CHECK(ct.as_function()(0.5) == ct.F_combined(0.5));
  CHECK_THROWS_AS(c1.F_minus(1.01), ValidationError);
  CHECK_THROWS_AS(CdfEstimate(g, q, 1.5), ValidationError);
}

TEST_CASE("estimates are not clamped to [0, 1]")
{
  // dense mass just below x pushes F_minus far above one
  const auto c = from_values(std::vector<double>(10, 0.5), 0.1);
  CHECK(c.F_minus(0.5) > 1.0);
  CHECK(c.F_plus(0.5) == 1.0);
  const auto d = from_values(std::vector<double>(10, 1.5), 0.1);
  CHECK(d.F_plus(0.5) < 0.0);
}

TEST_CASE("uniform events: F estimates near the truth at n = 1e5")
{
  ScenarioConfig cfg;
  cfg.n = 100000;
  cfg.f_family = "uniform";
  cfg.q_family = "uniform";
  const CdfEstimate c(GEstimate(transform(generate_css(cfg, 0).sample), 0.05), uniform_q());
  CHECK(std::abs(c.F_minus(0.5) - 0.5) < 0.02);
  CHECK(std::abs(c.F_plus(0.5) - 0.5) < 0.02);
  const double gap = c.F_minus(0.5) - (1.0 - c.F_plus(0.5));
  const double identity = c.g().value(0.5) - c.g().value(1.5);
  CHECK(gap == doctest::Approx(identity).epsilon(1e-12));
  CHECK(std::abs(gap) < 0.02);
}

TEST_CASE("bias oracle for F_minus")
{
  ScenarioConfig cfg;
  cfg.n = 10000;
  constexpr int M = 1000;
  const double h2 = 0.16, x = 0.3;
  const auto q = analytic_density(Family::truncnorm(0.5, 0.3));
  const TheoreticalExpansion te(Family::beta(2, 2), q);
  std::vector<double> est;
  for (int r = 0; r < M; ++r)
    est.push_back(CdfEstimate(GEstimate(transform(generate_css(cfg, r).sample), h2), q, 1.0).F_minus(x));
  const double predicted = te.F(x) + 0.5 * h2 * h2 * te.g2_left(x) / q(x) / 7.0;
  CHECK(predicted == doctest::Approx(te.cdf_mean(x, 1.0, h2)).epsilon(1e-12));
  const double se = std::sqrt(oracle::variance(est) / M);
  CHECK(std::abs(oracle::mean(est) - predicted) < 3.0 * se);
}

TEST_CASE("bandwidth coupling diagnostics")
{
  const auto a = validate_bandwidth_coupling(0.22, 0.16, 10000);
  CHECK(a.h1_floor == doctest::Approx(0.0937).epsilon(1e-3));
  CHECK(a.h2_target == doctest::Approx(0.1585).epsilon(1e-3));
  CHECK(a.h1_ok);
  CHECK(a.h2_ok);
  CHECK(a.warnings.empty());
  const auto b = validate_bandwidth_coupling(0.01, 0.16, 1000000);
  CHECK_FALSE(b.h1_ok);
  CHECK(b.h1_floor == doctest::Approx(0.0288).epsilon(1e-2));
  CHECK_FALSE(b.warnings.empty());
  CHECK_FALSE(validate_bandwidth_coupling(0.22, 0.9, 10000).h2_ok);
  CHECK(validate_bandwidth_coupling(0.44, 0.32, 10000, 2.0).h2_ok);
}
