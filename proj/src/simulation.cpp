#include "cskde/simulation.hpp"

#include "cskde/errors.hpp"
#include "cskde/expansion.hpp"
#include "cskde/observation_density.hpp"
#include "cskde/parallel.hpp"
#include "cskde/q_estimation.hpp"

#include <cmath>
#include <optional>

namespace cskde {

void ScenarioConfig::validate() const
{
  if (n < 2)
    throw ValidationError("scenario needs n >= 2");
  if (reps < 1)
    throw ValidationError("scenario needs at least one replication");
  if (x_grid.empty())
    throw ValidationError("scenario needs a non-empty evaluation grid");
  for (double x : x_grid)
    if (!(x > 0.0 && x < 1.0))
      throw ValidationError("scenario grid points must lie inside (0, 1)");
  if (htilde < 0.0 || !std::isfinite(htilde))
    throw ValidationError("htilde must be non-negative (0 selects the default)");
  if (!(ise_lo < ise_hi))
    throw ValidationError("ISE range must satisfy lo < hi");
  Family::parse(f_family);
  Family::parse(q_family);
  estimator().validate();
}

EstimatorConfig ScenarioConfig::estimator() const
{
  EstimatorConfig e;
  e.h1 = h1;
  e.h2 = h2;
  e.warp = warp;
  e.warp_fraction = warp_fraction;
  return e;
}

SimulatedData generate_css(const ScenarioConfig& cfg, std::uint64_t rep)
{
  const auto fx = Family::parse(cfg.f_family);
  const auto fq = Family::parse(cfg.q_family);
  Engine ex(substream_seed(cfg.master_seed, rep, "x"));
  Engine et(substream_seed(cfg.master_seed, rep, "t"));
  SimulatedData d;
  d.x = fx.sample(cfg.n, ex);
  d.sample.times = fq.sample(cfg.n, et);
  d.sample.statuses.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    d.sample.statuses[i] = d.x[i] <= d.sample.times[i] ? 1 : 0;
  d.sample.support = Support{ 0.0, 1.0 };
  return d;
}

namespace {

const char* const kDensityCurves[] = { "f_minus", "f_plus", "f_final", "f_final_unknown_q" };

using RepCurves = std::map<std::string, std::vector<double>>;

RepCurves one_replication(const ScenarioConfig& cfg, const ObservationDensity& q, const Kernel& k, std::size_t rep)
{
  const auto data = generate_css(cfg, rep);
  const auto V = transform(data.sample);
  const auto est = cfg.estimator();
  auto c = estimate_curves(V, q, k, est, cfg.x_grid);
  RepCurves out;
  out["f_minus"] = std::move(c.f_minus);
  out["f_plus"] = std::move(c.f_plus);
  out["f_final"] = std::move(c.f_final);
  out["F_minus"] = std::move(c.F_minus);
  out["F_plus"] = std::move(c.F_plus);
  out["F_half"] = std::move(c.F_combined);
  if (cfg.unknown_q) {
    const double ht = cfg.htilde > 0.0 ? cfg.htilde : default_htilde(data.sample.times, k);
    const auto qh = estimated_density(data.sample.times, ht, k);
    auto u = estimate_curves(V, qh, k, est, cfg.x_grid);
    out["f_final_unknown_q"] = std::move(u.f_final);
  }
  return out;
}

CurveSummary summarize(const std::vector<const std::vector<double>*>& rows, std::size_t m)
{
  CurveSummary s;
  s.mean.assign(m, 0.0);
  s.variance.assign(m, std::nan(""));
  const double r = static_cast<double>(rows.size());
  for (const auto* row : rows)
    for (std::size_t i = 0; i < m; ++i)
      s.mean[i] += (*row)[i];
  for (double& v : s.mean)
    v /= r;
  if (rows.size() > 1) {
    std::fill(s.variance.begin(), s.variance.end(), 0.0);
    for (const auto* row : rows)
      for (std::size_t i = 0; i < m; ++i) {
        const double d = (*row)[i] - s.mean[i];
        s.variance[i] += d * d;
      }
    for (double& v : s.variance)
      v /= r - 1.0;
  }
  return s;
}

} // namespace

ReplicationReport run_scenario(const ScenarioConfig& cfg)
{
  cfg.validate();
  const Kernel k = biweight();
  const auto fx = Family::parse(cfg.f_family);
  const auto q = analytic_density(Family::parse(cfg.q_family));
  const std::size_t m = cfg.x_grid.size();

  ReplicationReport r;
  r.config = cfg;
  r.x = cfg.x_grid;
  r.f_true.resize(m);
  r.F_true.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    r.f_true[i] = fx.pdf(r.x[i]);
    r.F_true[i] = fx.cdf(r.x[i]);
  }

  const TheoreticalExpansion te(fx, q, k.functionals);
  const double n = static_cast<double>(cfg.n);
  auto theory_curve = [&](auto&& mean_fn, auto&& var_fn) {
    CurveSummary s;
    for (double x : r.x) {
      s.mean.push_back(mean_fn(x));
      s.variance.push_back(var_fn(x));
    }
    return s;
  };
  r.theory["f_minus"] = theory_curve([&](double x) { return te.mean(x, 1.0, cfg.h1); },
                                     [&](double x) { return te.variance(x, 1.0, n, cfg.h1); });
  r.theory["f_plus"] = theory_curve([&](double x) { return te.mean(x, 0.0, cfg.h1); },
                                    [&](double x) { return te.variance(x, 0.0, n, cfg.h1); });
  r.theory["f_final"] = theory_curve(
    [&](double x) { return te.f(x) + 0.5 * cfg.h1 * cfg.h1 * k.moment2() * te.reduced_bias(x); },
    [&](double x) { return te.variance(x, 1.0 - te.F(x), n, cfg.h1); });
  r.theory["F_half"] = theory_curve([&](double x) { return te.cdf_mean(x, 0.5, cfg.h2); },
                                    [&](double x) { return te.cdf_variance(x, 0.5, n, cfg.h2); });

  std::vector<std::optional<RepCurves>> results(cfg.reps);
  std::vector<std::string> errors(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t rep) {
    try {
      results[rep] = one_replication(cfg, q, k, rep);
    } catch (const std::exception& e) {
      errors[rep] = e.what();
    }
  });

  std::map<std::string, std::vector<const std::vector<double>*>> rows;
  for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
    if (!results[rep]) {
      r.failures.push_back({ rep, errors[rep] });
      continue;
    }
    ++r.completed;
    for (const auto& [name, curve] : *results[rep]) {
      rows[name].push_back(&curve);
      for (const char* d : kDensityCurves)
        if (name == d)
          r.ise[name].push_back(integrated_squared_error(r.x, curve, r.f_true, cfg.ise_lo, cfg.ise_hi));
    }
  }
  for (const auto& [name, list] : rows)
    r.curves[name] = summarize(list, m);
  return r;
}

} // namespace cskde
