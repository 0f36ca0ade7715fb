#include "cskde/bandwidth.hpp"
#include "cskde/cdf.hpp"
#include "cskde/curves.hpp"
#include "cskde/errors.hpp"
#include "cskde/io.hpp"
#include "cskde/numeric_text.hpp"
#include "cskde/parallel.hpp"
#include "cskde/q_estimation.hpp"
#include "cskde/simulation.hpp"
#include "cskde/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

using namespace cskde;
using nlohmann::ordered_json;

namespace {

enum Exit : int
{
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kVerifyFailed = 3
};

struct SimulateArgs
{
  std::size_t n = 0;
  std::string x = "beta:2,2";
  std::string t = "truncnorm:0.5,0.3";
  std::uint64_t seed = 7;
  std::string out;
  bool with_truth = false;
};

struct EstimateArgs
{
  std::string input;
  std::string support = "0,1";
  std::string q;
  double h1 = 0.0;
  double h2 = 0.0;
  std::string bandwidth = "beta-reference";
  std::size_t grid = 401;
  std::string target = "both";
  double t_rule = 0.5;
  bool clamp_weight = false;
  bool clip_negative = false;
  bool warp = false;
  double warp_fraction = 1.0 / 20.0;
  std::string kernel = "biweight";
  double moment_htilde = 0.0;
  std::string out;
  std::string sidecar;

  CLI::Option* h1_opt = nullptr;
  CLI::Option* h2_opt = nullptr;
  CLI::Option* moment_htilde_opt = nullptr;
};

struct BandwidthArgs
{
  std::string input;
  std::string support = "0,1";
  std::string q;
  std::string bandwidth = "beta-reference";
  std::size_t n = 0;
  double moment_htilde = 0.0;
  std::string kernel = "biweight";
  std::string out;

  CLI::Option* n_opt = nullptr;
  CLI::Option* moment_htilde_opt = nullptr;
};

struct VerifyArgs
{
  std::string name;
  std::string profile = "full";
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 7;
  std::string out;

  CLI::Option* n_opt = nullptr;
  CLI::Option* reps_opt = nullptr;
};

std::optional<double> given(const CLI::Option* opt, double value)
{
  std::optional<double> out;
  if (opt->count() > 0)
    out.emplace(value);
  return out;
}

void warn(const std::string& msg)
{
  std::cerr << "warning: " << msg << '\n';
}

//! q from "estimate[:htilde]" or an analytic family spec.
struct ResolvedQ
{
  ObservationDensity q;
  std::optional<ObservationDensity> moment_q;
  std::string spec;
  std::vector<std::string> warnings;
};

ResolvedQ resolve_q(const std::string& spec,
                    const CurrentStatusSample& s,
                    const Kernel& k,
                    bool need_moment_q,
                    std::optional<double> moment_htilde)
{
  if (spec == "estimate" || spec.starts_with("estimate:")) {
    double ht = 0.0;
    if (spec.size() > 8) {
      const auto v = parse_double(std::string_view(spec).substr(9));
      if (!v || !(*v > 0.0))
        throw ValidationError("--q estimate:<htilde> needs a positive bandwidth, got '" + spec + "'");
      ht = *v;
    } else {
      ht = default_htilde(s.times, k);
    }
    ResolvedQ r{ estimated_density(s.times, ht, k), std::nullopt, "estimate:" + format_double(ht), {} };
    if (auto w = htilde_scaling_warning(ht, s.times, k))
      r.warnings.push_back(*w);
    if (need_moment_q) {
      const double mh = moment_htilde ? *moment_htilde : default_moment_htilde(s.times, k);
      r.moment_q = estimated_density(s.times, mh, k);
    }
    return r;
  }
  return { parse_observation_density(spec, s.support), std::nullopt, spec, {} };
}

int run_simulate(const SimulateArgs& a)
{
  ScenarioConfig cfg;
  cfg.n = a.n;
  cfg.f_family = a.x;
  cfg.q_family = a.t;
  cfg.master_seed = a.seed;
  cfg.validate();
  const std::string sidecar = a.out + ".json";
  require_writable(a.out);
  require_writable(sidecar);

  const auto data = generate_css(cfg, 0);
  std::ostringstream csv;
  write_css_csv(csv, data.sample, a.with_truth ? &data.x : nullptr);

  const ordered_json meta{ { "command", "simulate" },
                           { "config",
                             { { "n", a.n },
                               { "x", a.x },
                               { "t", a.t },
                               { "seed", a.seed },
                               { "with_truth", a.with_truth },
                               { "out", a.out } } } };
  write_file(a.out, csv.str());
  write_file(sidecar, dump(meta));
  return kOk;
}

int run_estimate(const EstimateArgs& a)
{
  const Support support = parse_support(a.support);
  const auto target = parse_curve_target(a.target);
  const Kernel k = kernel_by_name(a.kernel);
  const auto selector = BandwidthSelector::parse(a.bandwidth);
  const std::string sidecar = a.sidecar.empty() ? a.out + ".json" : a.sidecar;
  require_writable(a.out);
  require_writable(sidecar);

  const auto sample = read_css_file(a.input, support);
  const auto V = transform(sample);
  const double n = static_cast<double>(sample.size());
  const bool select_h1 = a.h1_opt->count() == 0;
  auto rq = resolve_q(a.q,
                      sample,
                      k,
                      select_h1 && selector.kind == SelectorKind::beta_reference,
                      given(a.moment_htilde_opt, a.moment_htilde));

  std::vector<std::string> warnings = rq.warnings;
  ordered_json bw_json = nullptr;
  double h1 = a.h1;
  if (select_h1) {
    ReferenceOptions ro;
    ro.moment_q = rq.moment_q;
    const auto report = select_bandwidth(selector, V, rq.q, k, n, ro);
    h1 = report.h;
    warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
    bw_json = to_json(report);
  }
  const double h2 = a.h2_opt->count() ? a.h2 : support.width() * std::pow(n, -0.2);

  EstimatorConfig ec;
  ec.h1 = h1;
  ec.h2 = h2;
  ec.t_rule = a.t_rule;
  ec.clamp_weight = a.clamp_weight;
  ec.clip_negative = a.clip_negative;
  ec.warp = a.warp;
  ec.warp_fraction = a.warp_fraction;
  const auto coupling = validate_bandwidth_coupling(h1, h2, sample.size(), support.width());
  warnings.insert(warnings.end(), coupling.warnings.begin(), coupling.warnings.end());

  const auto curves = estimate_curves(V, rq.q, k, ec, default_grid(support, a.grid));
  warnings.insert(warnings.end(), curves.warnings.begin(), curves.warnings.end());

  std::ostringstream csv;
  write_curves_csv(csv, curves, target);
  ordered_json cfg{ { "input", a.input },
                    { "support", { support.a, support.b } },
                    { "n", sample.size() },
                    { "q", rq.spec },
                    { "h1", h1 },
                    { "h2", h2 },
                    { "bandwidth", select_h1 ? selector.spec() : "fixed:" + format_double(h1) },
                    { "grid", a.grid },
                    { "target", curve_target_name(target) },
                    { "t_rule", a.t_rule },
                    { "clamp_weight", a.clamp_weight },
                    { "clip_negative", a.clip_negative },
                    { "warp", a.warp },
                    { "warp_fraction", a.warp_fraction },
                    { "kernel", k.name },
                    { "out", a.out } };
  if (rq.moment_q)
    cfg["moment_htilde"] = rq.moment_q->htilde();
  const ordered_json meta{ { "command", "estimate" },
                           { "config", cfg },
                           { "bandwidth_report", bw_json },
                           { "coupling", to_json(coupling) },
                           { "degenerate_grid_indices", curves.degenerate },
                           { "warnings", warnings } };
  for (const auto& w : warnings)
    warn(w);
  write_file(a.out, csv.str());
  write_file(sidecar, dump(meta));
  return kOk;
}

int run_bandwidth(const BandwidthArgs& a)
{
  const Support support = parse_support(a.support);
  const Kernel k = kernel_by_name(a.kernel);
  const auto selector = BandwidthSelector::parse(a.bandwidth);
  if (!a.out.empty())
    require_writable(a.out);

  const auto sample = read_css_file(a.input, support);
  const auto V = transform(sample);
  const double n = a.n_opt->count() ? static_cast<double>(a.n) : static_cast<double>(sample.size());
  auto rq = resolve_q(a.q,
                      sample,
                      k,
                      selector.kind == SelectorKind::beta_reference,
                      given(a.moment_htilde_opt, a.moment_htilde));
  ReferenceOptions ro;
  ro.moment_q = rq.moment_q;
  auto report = select_bandwidth(selector, V, rq.q, k, n, ro);
  report.warnings.insert(report.warnings.begin(), rq.warnings.begin(), rq.warnings.end());
  for (const auto& w : report.warnings)
    warn(w);

  ordered_json cfg{ { "input", a.input },
                    { "support", { support.a, support.b } },
                    { "q", rq.spec },
                    { "bandwidth", selector.spec() },
                    { "n", n },
                    { "kernel", k.name } };
  if (rq.moment_q)
    cfg["moment_htilde"] = rq.moment_q->htilde();
  const ordered_json out{ { "command", "bandwidth" }, { "config", cfg }, { "report", to_json(report) } };
  if (a.out.empty())
    std::cout << dump(out);
  else
    write_file(a.out, dump(out));
  return kOk;
}

int run_verify(const VerifyArgs& a)
{
  VerifyOptions o;
  o.profile = parse_profile(a.profile);
  o.seed = a.seed;
  if (a.n_opt->count())
    o.n = a.n;
  if (a.reps_opt->count())
    o.reps = a.reps;
  if (!a.out.empty())
    require_writable(a.out);

  std::vector<VerificationReport> reports;
  if (a.name == "all")
    reports = verify_all(o);
  else
    reports.push_back(verify_theorem(a.name, o));

  bool pass = true;
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass();
    list.push_back(to_json(r));
    for (const auto& c : r.checks)
      std::cerr << (c.pass ? "PASS " : "FAIL ") << r.theorem << ": " << c.name << " observed "
                << format_double(c.observed) << " (" << c.rule << ", predicted "
                << format_double(c.predicted) << ", tolerance " << format_double(c.tolerance) << ")\n";
  }
  const ordered_json out{ { "command", "verify" },
                          { "check", a.name },
                          { "profile", a.profile },
                          { "seed", a.seed },
                          { "pass", pass },
                          { "reports", list } };
  if (a.out.empty())
    std::cout << dump(out);
  else
    write_file(a.out, dump(out));
  return pass ? kOk : kVerifyFailed;
}

void add_density_options(CLI::App* cmd, std::string& input, std::string& support, std::string& q, std::string& kernel)
{
  cmd->add_option("--input", input, "CSV with header t,delta")->required();
  cmd->add_option("--support", support, "Observation window a,b")->capture_default_str();
  cmd->add_option("--q", q, "uniform | beta:a,b | truncnorm:mu,sigma | estimate[:htilde]")->required();
  cmd->add_option("--kernel", kernel, "Kernel name")->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Kernel estimation of densities and distribution functions from current status data",
                "cskde" };
  app.set_config("--config", "", "TOML file with [subcommand] sections; flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Write a simulated current status sample");
  s->add_option("--n", sim.n, "Sample size")->required();
  s->add_option("--x", sim.x, "Event-time family")->capture_default_str();
  s->add_option("--t", sim.t, "Observation-time family")->capture_default_str();
  s->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  s->add_option("--out", sim.out, "Output CSV path")->required();
  s->add_flag("--with-truth", sim.with_truth, "Add the hidden event time column x");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate density and distribution curves");
  add_density_options(e, est.input, est.support, est.q, est.kernel);
  est.h1_opt = e->add_option("--h1", est.h1, "Density bandwidth (overrides --bandwidth)");
  est.h2_opt = e->add_option("--h2", est.h2, "Distribution-function bandwidth (default L n^(-1/5))");
  e->add_option("--bandwidth", est.bandwidth, "fixed:<h> | beta-reference | rule-of-thumb")->capture_default_str();
  e->add_option("--grid", est.grid, "Number of grid points")->capture_default_str()->check(CLI::Range(2, 1000000));
  e->add_option("--target", est.target, "density | cdf | both")->capture_default_str();
  e->add_option("--t-rule", est.t_rule, "Weight of the distribution-function estimator")->capture_default_str();
  e->add_flag("--clamp-weight", est.clamp_weight, "Clamp the plug-in F to [0, 1]");
  e->add_flag("--clip-negative", est.clip_negative, "Clip negative f_final and renormalize on the grid");
  e->add_flag("--warp", est.warp, "Use binned (WARPing) kernel sums");
  e->add_option("--warp-fraction", est.warp_fraction, "Bin width as a fraction of h")->capture_default_str();
  est.moment_htilde_opt = e->add_option("--moment-htilde", est.moment_htilde, "q bandwidth in the moment step");
  e->add_option("--out", est.out, "Output CSV path")->required();
  e->add_option("--sidecar", est.sidecar, "JSON sidecar path (default <out>.json)");

  BandwidthArgs bw;
  auto* b = app.add_subcommand("bandwidth", "Select the density bandwidth");
  add_density_options(b, bw.input, bw.support, bw.q, bw.kernel);
  b->add_option("--bandwidth", bw.bandwidth, "fixed:<h> | beta-reference | rule-of-thumb")->capture_default_str();
  bw.n_opt = b->add_option("--n", bw.n, "Sample size used in the formula (default: rows read)");
  bw.moment_htilde_opt = b->add_option("--moment-htilde", bw.moment_htilde, "q bandwidth in the moment step");
  b->add_option("--out", bw.out, "JSON report path (default stdout)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run Monte Carlo checks of the asymptotic theory");
  std::vector<std::string> names = theorem_names();
  names.emplace_back("all");
  v->add_option("check", ver.name, "thm-variance | thm-bias | thm-normality | thm-cdf | thm-unknown-q | all")
    ->required()
    ->check(CLI::IsMember(names));
  v->add_option("--profile", ver.profile, "full | quick")->capture_default_str()->check(CLI::IsMember({ "full", "quick" }));
  ver.n_opt = v->add_option("--n", ver.n, "Override the primary sample size");
  ver.reps_opt = v->add_option("--reps", ver.reps, "Override the primary replication count");
  v->add_option("--seed", ver.seed, "Master seed")->capture_default_str();
  v->add_option("--out", ver.out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kUsage;
  }

  try {
    worker_count();
    if (s->parsed())
      return run_simulate(sim);
    if (e->parsed())
      return run_estimate(est);
    if (b->parsed())
      return run_bandwidth(bw);
    return run_verify(ver);
  } catch (const ValidationError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const CapabilityError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kData;
  }
}
