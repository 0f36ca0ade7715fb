#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cskde/cdf.hpp"
#include "cskde/errors.hpp"
#include "cskde/expansion.hpp"
#include "cskde/q_estimation.hpp"
#include "cskde/simulation.hpp"
#include "oracle.hpp"

#include <cmath>
#include <vector>

using namespace cskde;

namespace {

std::vector<double> uniform_times(std::size_t n, std::uint64_t rep)
{
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.q_family = "uniform";
  return generate_css(cfg, rep).sample.times;
}

} // namespace

TEST_CASE("q_hat on a single time and on uniform times")
{
  const std::vector<double> one{ 0.5 };
  const Kernel k = biweight();
  CHECK(q_hat(one, 0.1, k, 0.5) == doctest::Approx(9.375).epsilon(1e-14));
  CHECK(q_hat_derivs(one, 0.1, k, 0.5).d1 == 0.0);

  const auto T = uniform_times(100000, 0);
  CHECK(std::abs(q_hat(T, 0.05, k, 0.5) - 1.0) < 0.05);

  // sd of the q'' estimate: sqrt(q int w''^2 / (n h^5)), int w''^2 = 22.5
  const double h = 0.15;
  const double sd = std::sqrt(22.5 / (1e5 * std::pow(h, 5)));
  CHECK(std::abs(q_hat_derivs(T, h, k, 0.5).d2) < 3.0 * sd);
}

TEST_CASE("q_hat integrates to one and its derivative matches finite differences")
{
  const auto T = uniform_times(400, 1);
  const Kernel k = biweight();
  const double h = 0.08;
  const double mass = oracle::simpson([&](double x) { return q_hat(T, h, k, x); }, -0.1, 1.1, 100000);
  CHECK(std::abs(mass - 1.0) < 1e-8);
  for (const double x : { 0.2, 0.51, 0.93 }) {
    const double fd = oracle::central_diff([&](double y) { return q_hat(T, h, k, y); }, x, 1e-6);
    CHECK(std::abs(fd - q_hat_derivs(T, h, k, x).d1) < 1e-4);
  }
}

TEST_CASE("estimated density: same functions, wrapped mass two, no q'''")
{
  const auto T = uniform_times(500, 2);
  const double h = 0.1;
  const auto q = estimated_density(T, h);
  CHECK(q.mode() == DensityMode::estimated);
  CHECK(q.htilde() == h);
  CHECK_FALSE(q.has_d3());
  CHECK_THROWS_AS(q.d3(0.5), CapabilityError);
  for (const double x : { 0.05, 0.5, 0.99 }) {
    CHECK(q(x) == doctest::Approx(q_hat(T, h, biweight(), x)).epsilon(1e-13));
    CHECK(q.d2(x) == doctest::Approx(q_hat_derivs(T, h, biweight(), x).d2).epsilon(1e-12));
  }
  const auto qbar = [&](double v) { return q.wrapped(v, 1.0); };
  const double mass = oracle::simpson(qbar, -h, 2.0 + h, 200000);
  CHECK(std::abs(mass - 2.0) < 1e-6);
}

TEST_CASE("missing w'' is a capability error")
{
  const Kernel bw = biweight();
  const Kernel k = make_kernel("no-second", bw.eval, bw.deriv);
  const std::vector<double> T{ 0.2, 0.4 };
  CHECK_THROWS_AS(q_hat_derivs(T, 0.1, k, 0.3), CapabilityError);
  CHECK_THROWS_AS(estimated_density(T, 0.1, k).d2(0.3), CapabilityError);
  CHECK_THROWS_AS(q_hat(T, 0.0, bw, 0.3), ValidationError);
}

TEST_CASE("normal-reference bandwidths")
{
  CHECK(normal_reference_htilde(1.0, 1) == doctest::Approx(2.491).epsilon(1e-3));
  CHECK(normal_reference_level(1.0, 1) == doctest::Approx(2.778).epsilon(1e-3));
  CHECK(normal_reference_htilde(1.0, 128) == doctest::Approx(normal_reference_htilde(1.0, 1) / 2.0));
  const auto T = uniform_times(1000, 3);
  const double ref = default_htilde(T);
  CHECK_FALSE(htilde_scaling_warning(ref, T));
  CHECK_FALSE(htilde_scaling_warning(4.0 * ref, T));
  CHECK(htilde_scaling_warning(6.0 * ref, T));
  CHECK(htilde_scaling_warning(0.1 * ref, T));
}

TEST_CASE("unknown-q bias correction vanishes for uniform q")
{
  const TheoreticalExpansion te(Family::beta(2, 2), analytic_density(Family::uniform()));
  CHECK(te.unknown_q_bias(0.4, 1.0) == doctest::Approx(-12.0));
  const TheoreticalExpansion tn(Family::beta(2, 2), analytic_density(Family::truncnorm(0.5, 0.3)));
  const auto& q = tn.observation_density();
  const double x = 0.3;
  CHECK(tn.unknown_q_bias(x, 0.5) ==
        doctest::Approx(tn.reduced_bias(x) - 0.25 * tn.f(x) * q.d2(x) / q(x)).epsilon(1e-12));
}

TEST_CASE("estimated and analytic q share one code path")
{
  ScenarioConfig cfg;
  cfg.n = 3000;
  const auto data = generate_css(cfg, 4).sample;
  const auto V = transform(data);
  const auto qa = analytic_density(Family::truncnorm(0.5, 0.3));
  const ObservationDensity qe(
    DensityMode::estimated, qa, [&](double x) { return qa.d1(x); }, [&](double x) { return qa.d2(x); }, {}, "injected", 0.1);
  const GEstimate g(V, 0.22);
  const CdfEstimate Fa(g.with_bandwidth(0.16), qa), Fe(g.with_bandwidth(0.16), qe);
  for (const double x : { 0.1, 0.5, 0.9 })
    CHECK(f_final(g, qa, Fa.as_function(), x) == f_final(g, qe, Fe.as_function(), x));
}

TEST_CASE("f_final_unknown_q is repeatable and close to the known-q estimate")
{
  ScenarioConfig cfg;
  cfg.n = 100000;
  cfg.f_family = "beta:2,2";
  cfg.q_family = "uniform";
  const auto s = generate_css(cfg, 5).sample;
  const Kernel k = biweight();
  const double htilde = default_htilde(s.times);
  const double a = f_final_unknown_q(s, 0.22, htilde, 0.16, k, 0.37);
  CHECK(a == f_final_unknown_q(s, 0.22, htilde, 0.16, k, 0.37));

  const auto q1 = analytic_density(Family::uniform());
  const GEstimate g(transform(s), 0.22);
  const CdfEstimate F(g.with_bandwidth(0.16), q1);
  double sup = 0.0;
  for (double x = 0.1; x <= 0.9 + 1e-12; x += 0.02) {
    const double known = f_final(g, q1, F.as_function(), x);
    sup = std::max(sup, std::abs(f_final_unknown_q(s, 0.22, htilde, 0.16, k, x) - known));
  }
  CHECK(sup < 0.1);
}
