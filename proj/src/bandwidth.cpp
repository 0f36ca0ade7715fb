#include "cskde/bandwidth.hpp"

#include "cskde/errors.hpp"
#include "cskde/numeric_text.hpp"
#include "cskde/quadrature.hpp"
#include "cskde/stats.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cskde {

namespace {

// Beta fits this close to (1, 1) are treated as a flat reference.
constexpr double kFlatFitTolerance = 0.1;

// A kernel-estimated q'' jumps at every T_k +- htilde.
double integrate_over(const TheoreticalExpansion& te, const RealFn& f, double delta)
{
  if (te.observation_density().mode() == DensityMode::estimated)
    return integrate(f, delta, 1.0 - delta, 1e-6, 6);
  return integrate(f, delta, 1.0 - delta);
}

} // namespace

MomentEstimates moment_estimates(std::span<const double> v_unit, const RealFn& qbar)
{
  if (v_unit.empty())
    throw ValidationError("moment estimates need a non-empty sample");
  double s1 = 0.0;
  double s2 = 0.0;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < v_unit.size(); ++i) {
    const double v = v_unit[i];
    const double qb = qbar(v);
    if (!(qb > kQFloor)) {
      bad.push_back(i);
      continue;
    }
    s1 += v / qb;
    s2 += v * v / qb;
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "wrapped observation density is degenerate at " << bad.size() << " sample value(s)";
    throw DegenerateObservationDensity(msg.str(), std::move(bad));
  }
  const double n = static_cast<double>(v_unit.size());
  MomentEstimates m;
  m.A = s1 / n - 0.5;
  m.B = s2 / n - m.A - 1.0 / 3.0;
  m.C = m.B - m.A * m.A;
  return m;
}

MomentEstimates moment_estimates(const TransformedSample& V, const ObservationDensity& q)
{
  const Support& s = V.support;
  const auto qu = rescale_to_unit(q, s);
  std::vector<double> vu(V.values.size());
  std::transform(V.values.begin(), V.values.end(), vu.begin(), [&](double v) { return s.to_unit(v); });
  return moment_estimates(vu, [&qu](double v) { return qu.wrapped(v, 1.0); });
}

BetaParams beta_mom(const MomentEstimates& m)
{
  if (!(m.C > 0.0))
    throw BetaFitInfeasible("moment-based variance estimate is not positive");
  if (!(m.A > 0.0 && m.A < 1.0))
    throw BetaFitInfeasible("moment-based mean estimate is outside (0, 1)");
  const double k = m.A * (1.0 - m.A) / m.C - 1.0;
  if (!(k > 0.0))
    throw BetaFitInfeasible("variance estimate too large for any Beta distribution");
  return { m.A * k, (1.0 - m.A) * k };
}

MiseFunctionals mise_functionals(const TheoreticalExpansion& te, double delta)
{
  MiseFunctionals out;
  const auto bias2 = [&te](double x) {
    const double b = te.reduced_bias(x);
    return b * b;
  };
  const auto var = [&te](double x) {
    const double F = te.F(x);
    return F * (1.0 - F) / te.observation_density().value(x);
  };
  out.bias_integral = integrate_over(te, bias2, delta);
  out.variance_integral = integrate_over(te, var, delta);
  return out;
}

namespace {

void require_bias(double I_B)
{
  if (!(I_B > 0.0) || !std::isfinite(I_B))
    throw DegenerateBandwidth(
      "squared-bias integral vanishes (reference density has no curvature); choose a fixed "
      "bandwidth or the rule-of-thumb selector");
}

} // namespace

OptimalBandwidth h_opt(const TheoreticalExpansion& te, double n, double delta)
{
  const auto fn = mise_functionals(te, delta);
  require_bias(fn.bias_integral);
  const auto& k = te.kernel();
  const double h7 = 3.0 * k.deriv_sq_norm * fn.variance_integral /
                    (n * k.moment2 * k.moment2 * fn.bias_integral);
  return { std::pow(h7, 1.0 / 7.0), fn };
}

double mise_expansion(const TheoreticalExpansion& te, double n, double h, double delta)
{
  const auto fn = mise_functionals(te, delta);
  const auto& k = te.kernel();
  return 0.25 * std::pow(h, 4) * k.moment2 * k.moment2 * fn.bias_integral +
         k.deriv_sq_norm * fn.variance_integral / (n * h * h * h);
}

UnknownQFunctionals unknown_q_functionals(const TheoreticalExpansion& te, double delta)
{
  const auto& q = te.observation_density();
  auto S = [&](double x) { return te.f(x) * q.d2(x) / q.value(x); };
  UnknownQFunctionals out;
  out.RR = integrate_over(te, [&](double x) { return std::pow(te.reduced_bias(x), 2); }, delta);
  out.RS = integrate_over(te, [&](double x) { return te.reduced_bias(x) * S(x); }, delta);
  out.SS = integrate_over(te, [&](double x) { return std::pow(S(x), 2); }, delta);
  out.variance_integral = mise_functionals(te, delta).variance_integral;
  return out;
}

double mise_unknown_q(const UnknownQFunctionals& fn,
                      const KernelFunctionals& k,
                      double n,
                      double h,
                      double htilde)
{
  const double h2 = h * h;
  const double t2 = htilde * htilde;
  const double bias2 = h2 * h2 * fn.RR - 2.0 * h2 * t2 * fn.RS + t2 * t2 * fn.SS;
  return 0.25 * k.moment2 * k.moment2 * bias2 + k.deriv_sq_norm * fn.variance_integral / (n * h2 * h);
}

double h_opt_unknown_q(const UnknownQFunctionals& fn,
                       const KernelFunctionals& k,
                       double n,
                       double htilde)
{
  require_bias(fn.RR);
  const double mu4 = k.moment2 * k.moment2;
  const double c = 3.0 * k.deriv_sq_norm * fn.variance_integral / n;
  // h^4 dMISE/dh, negative below the root and increasing beyond it
  auto phi = [&](double h) {
    const double h5 = std::pow(h, 5);
    return mu4 * (h5 * h * h * fn.RR - h5 * htilde * htilde * fn.RS) - c;
  };
  double lo = fn.RS > 0.0 ? htilde * std::sqrt(fn.RS / fn.RR) : 0.0;
  lo = std::max(lo, 1e-12);
  double hi = std::max(2.0 * lo, 1e-3);
  while (phi(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw DegenerateBandwidth("no finite minimizer of the estimated-q AMISE");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] =
    boost::math::tools::toms748_solve(phi, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (a + b);
}

BandwidthSelector BandwidthSelector::parse(std::string_view spec)
{
  if (spec == "beta-reference")
    return { SelectorKind::beta_reference, 0.0 };
  if (spec == "rule-of-thumb")
    return { SelectorKind::rule_of_thumb, 0.0 };
  if (spec.starts_with("fixed:")) {
    const auto v = parse_double(spec.substr(6));
    if (!v || !(*v > 0.0) || !std::isfinite(*v))
      throw ValidationError("fixed bandwidth must be a positive number, got '" + std::string(spec) + "'");
    return { SelectorKind::fixed, *v };
  }
  throw ValidationError("unknown bandwidth selector '" + std::string(spec) +
                        "' (expected fixed:<h> | beta-reference | rule-of-thumb)");
}

std::string BandwidthSelector::spec() const
{
  switch (kind) {
    case SelectorKind::fixed:
      return "fixed:" + format_double(value);
    case SelectorKind::beta_reference:
      return "beta-reference";
    case SelectorKind::rule_of_thumb:
      return "rule-of-thumb";
  }
  return {};
}

double rule_of_thumb(const TransformedSample& V, double n)
{
  const double sd = sample_sd(V.values);
  if (!(sd > 0.0))
    throw ValidationError("transformed sample has zero spread; rule-of-thumb bandwidth undefined");
  return 0.5 * sd * std::pow(n, -1.0 / 7.0);
}

namespace {

BandwidthReport fallback(const TransformedSample& V, double n, BandwidthReport r, const std::string& why)
{
  r.h = rule_of_thumb(V, n);
  r.method = "rule-of-thumb";
  r.warnings.push_back(why + "; using the rule-of-thumb bandwidth 0.5 sd(V) n^(-1/7)");
  return r;
}

} // namespace

BandwidthReport reference_bandwidth(const TransformedSample& V,
                                    const ObservationDensity& q,
                                    const Kernel& k,
                                    double n,
                                    const ReferenceOptions& opts)
{
  if (!(n >= 2.0))
    throw ValidationError("reference bandwidth needs n >= 2");
  const Support& s = V.support;
  BandwidthReport r;
  r.method = "beta-reference";
  r.moments = moment_estimates(V, opts.moment_q ? *opts.moment_q : q);
  try {
    r.beta = beta_mom(*r.moments);
  } catch (const BetaFitInfeasible& e) {
    return fallback(V, n, std::move(r), std::string("Beta fit infeasible: ") + e.what());
  }
  if (std::abs(r.beta->alpha - 1.0) < kFlatFitTolerance && std::abs(r.beta->beta - 1.0) < kFlatFitTolerance)
    return fallback(V, n, std::move(r), "fitted Beta reference is flat, so the bias integral degenerates");

  const TheoreticalExpansion te(Family::beta(r.beta->alpha, r.beta->beta), rescale_to_unit(q, s), k.functionals);
  try {
    double h_unit = 0.0;
    if (q.mode() == DensityMode::estimated) {
      const auto fn = unknown_q_functionals(te, opts.delta);
      h_unit = h_opt_unknown_q(fn, k.functionals, n, q.htilde() / s.width());
      r.bias_integral = fn.RR;
      r.variance_integral = fn.variance_integral;
    } else {
      const auto opt = h_opt(te, n, opts.delta);
      h_unit = opt.h;
      r.bias_integral = opt.functionals.bias_integral;
      r.variance_integral = opt.functionals.variance_integral;
    }
    r.h = h_unit * s.width();
  } catch (const DegenerateBandwidth& e) {
    return fallback(V, n, std::move(r), e.what());
  }
  return r;
}

BandwidthReport select_bandwidth(const BandwidthSelector& sel,
                                 const TransformedSample& V,
                                 const ObservationDensity& q,
                                 const Kernel& k,
                                 double n,
                                 const ReferenceOptions& opts)
{
  switch (sel.kind) {
    case SelectorKind::fixed: {
      BandwidthReport r;
      r.h = sel.value;
      r.method = "fixed";
      return r;
    }
    case SelectorKind::rule_of_thumb: {
      BandwidthReport r;
      r.h = rule_of_thumb(V, n);
      r.method = "rule-of-thumb";
      return r;
    }
    case SelectorKind::beta_reference:
      break;
  }
  return reference_bandwidth(V, q, k, n, opts);
}

} // namespace cskde
