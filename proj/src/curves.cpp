#include "cskde/curves.hpp"

#include "cskde/cdf.hpp"
#include "cskde/errors.hpp"
#include "cskde/parallel.hpp"
#include "cskde/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace cskde {

void EstimatorConfig::validate() const
{
  for (double h : { h1, h2 })
    if (!(h > 0.0) || !std::isfinite(h))
      throw ValidationError("bandwidths must be positive and finite");
  if (!(t_rule >= 0.0 && t_rule <= 1.0))
    throw ValidationError("t_rule must lie in [0, 1]");
  if (warp && !(warp_fraction > 0.0 && warp_fraction <= 1.0))
    throw ValidationError("WARPing bin fraction must lie in (0, 1]");
}

std::vector<double> default_grid(Support s, std::size_t points)
{
  s.validate();
  if (points < 2)
    throw ValidationError("a grid needs at least two points");
  const double lo = 0.0025;
  const double step = (1.0 - 2.0 * lo) / static_cast<double>(points - 1);
  std::vector<double> x(points);
  for (std::size_t i = 0; i < points; ++i)
    x[i] = s.from_unit(lo + static_cast<double>(i) * step);
  return x;
}

namespace {

struct Evaluator
{
  GEstimate direct;
  std::optional<WarpGrid> grid;

  GEstimate::Point at(double x) const
  {
    return grid ? warp_at(*grid, direct.kernel(), direct.bandwidth(), x) : direct.at(x);
  }
};

Evaluator make_evaluator(const GEstimate& g, const TransformedSample& V, const EstimatorConfig& cfg)
{
  Evaluator e{ g, std::nullopt };
  if (cfg.warp)
    e.grid = WarpGrid::for_bandwidth(V, g.bandwidth(), cfg.warp_fraction);
  return e;
}

void clip_and_renormalize(std::span<const double> x, std::span<double> f)
{
  double mass = 0.0;
  for (double& v : f)
    if (v < 0.0)
      v = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::isfinite(f[i]) && std::isfinite(f[i - 1]))
      mass += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  if (mass > 0.0)
    for (double& v : f)
      v /= mass;
}

} // namespace

CurveSet estimate_curves(const TransformedSample& V,
                         const ObservationDensity& q,
                         const Kernel& k,
                         const EstimatorConfig& cfg,
                         std::span<const double> grid)
{
  cfg.validate();
  const Support& s = V.support;
  for (double x : grid)
    detail::require_interior(s, x);

  const GEstimate g1(V, cfg.h1, k);
  const GEstimate g2 = g1.with_bandwidth(cfg.h2);
  const Evaluator e1 = make_evaluator(g1, V, cfg);
  const Evaluator e2 = make_evaluator(g2, V, cfg);
  const double L = s.width();

  const std::size_t m = grid.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CurveSet c;
  c.x.assign(grid.begin(), grid.end());
  for (auto* v : { &c.f_minus, &c.f_plus, &c.f_final, &c.F_minus, &c.F_plus, &c.F_combined })
    v->assign(m, nan);
  std::vector<char> bad(m, 0);

  parallel_for(m, [&](std::size_t i) {
    const double x = grid[i];
    const double qx = q(x);
    if (!(qx > kQFloor)) {
      bad[i] = 1;
      return;
    }
    const double q1 = q.d1(x);
    const double fm = detail::invert_left(e1.at(x), qx, q1);
    const double fp = detail::invert_right(e1.at(x + L), qx, q1);
    const double Fm = e2.at(x).g / qx;
    const double Fp = 1.0 - e2.at(x + L).g / qx;
    const double Fc = cfg.t_rule * Fm + (1.0 - cfg.t_rule) * Fp;
    const double w = cfg.clamp_weight ? std::clamp(Fc, 0.0, 1.0) : Fc;
    c.f_minus[i] = fm;
    c.f_plus[i] = fp;
    c.f_final[i] = (1.0 - w) * fm + w * fp;
    c.F_minus[i] = Fm;
    c.F_plus[i] = Fp;
    c.F_combined[i] = Fc;
  });

  for (std::size_t i = 0; i < m; ++i)
    if (bad[i])
      c.degenerate.push_back(i);
  if (!c.degenerate.empty()) {
    std::ostringstream msg;
    msg << c.degenerate.size() << " grid point(s) have q(x) <= " << kQFloor
        << "; estimates there are NaN";
    c.warnings.push_back(msg.str());
  }
  for (const auto* g : { &g1, &g2 })
    if (g->wide_bandwidth()) {
      std::ostringstream msg;
      msg << "bandwidth " << g->bandwidth() << " is at least half the support width; the kernel"
          << " windows at x and x + L overlap";
      c.warnings.push_back(msg.str());
    }
  if (cfg.clip_negative)
    clip_and_renormalize(c.x, c.f_final);
  return c;
}

double integrated_squared_error(std::span<const double> x,
                                std::span<const double> est,
                                std::span<const double> truth,
                                double lo,
                                double hi)
{
  if (x.size() != est.size() || x.size() != truth.size())
    throw ValidationError("ISE needs curves of equal length");
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] < lo || x[i] > hi)
      continue;
    const double a = est[i - 1] - truth[i - 1];
    const double b = est[i] - truth[i];
    sum += 0.5 * (a * a + b * b) * (x[i] - x[i - 1]);
  }
  return sum;
}

} // namespace cskde
