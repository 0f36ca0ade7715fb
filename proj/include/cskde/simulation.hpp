#pragma once

#include "cskde/curves.hpp"
#include "cskde/distributions.hpp"
#include "cskde/transform.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cskde {

/// A Monte Carlo scenario on [0, 1]. Defaults reproduce the reference
/// experiment: Beta(2,2) events, N(0.5, 0.3^2) observation times conditioned
/// on [0, 1], n = 10000, h1 = 0.22, h2 = 0.16.
struct ScenarioConfig
{
  std::size_t n = 10000;
  std::size_t reps = 20;
  std::string f_family = "beta:2,2";
  std::string q_family = "truncnorm:0.5,0.3";
  std::vector<double> x_grid = default_grid();
  double h1 = 0.22;
  double h2 = 0.16;
  //! Also run the estimated-q pipeline.
  bool unknown_q = false;
  //! Bandwidth of q_hat; 0 selects the normal-reference default per replication.
  double htilde = 0.0;
  std::uint64_t master_seed = 7;
  bool warp = false;
  double warp_fraction = 1.0 / 20.0;
  double ise_lo = 0.05;
  double ise_hi = 0.95;

  void validate() const;
  EstimatorConfig estimator() const;
};

struct SimulatedData
{
  CurrentStatusSample sample;
  //! Hidden event times, for oracles only.
  std::vector<double> x;
};

/// Replication `rep` of the scenario. Event times come from substream "x",
/// observation times from substream "t"; delta = 1{x <= t}.
SimulatedData generate_css(const ScenarioConfig& cfg, std::uint64_t rep);

struct CurveSummary
{
  std::vector<double> mean;
  std::vector<double> variance;
};

struct ReplicationFailure
{
  std::size_t rep = 0;
  std::string message;
};

struct ReplicationReport
{
  ScenarioConfig config;
  std::vector<double> x;
  std::vector<double> f_true;
  std::vector<double> F_true;
  //! Per-estimator mean and variance over completed replications.
  std::map<std::string, CurveSummary> curves;
  //! Leading-order mean and variance of the known-q estimators.
  std::map<std::string, CurveSummary> theory;
  //! ISE of each density curve, one entry per completed replication.
  std::map<std::string, std::vector<double>> ise;
  std::vector<ReplicationFailure> failures;
  std::size_t completed = 0;
};

/// Runs every replication and aggregates in replication order. A failing
/// replication is recorded in `failures` and excluded from the summaries.
ReplicationReport run_scenario(const ScenarioConfig& cfg);

} // namespace cskde
