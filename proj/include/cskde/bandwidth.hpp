#pragma once

#include "cskde/expansion.hpp"
#include "cskde/kernels.hpp"
#include "cskde/observation_density.hpp"
#include "cskde/transform.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cskde {

struct BetaParams
{
  double alpha = 1.0;
  double beta = 1.0;
};

//! Moment estimates of X recovered from the transformed sample.
struct MomentEstimates
{
  double A = 0.0; //!< E X
  double B = 0.0; //!< E X^2
  double C = 0.0; //!< B - A^2
};

/// A = mean(v/qbar(v)) - 1/2, B = mean(v^2/qbar(v)) - A - 1/3 on the unit
/// interval. Throws DegenerateObservationDensity listing every index with
/// qbar(v_i) <= kQFloor.
MomentEstimates moment_estimates(std::span<const double> v_unit, const RealFn& qbar);

//! Same, for a sample on [a, b]: values and q are mapped to the unit interval.
MomentEstimates moment_estimates(const TransformedSample& V, const ObservationDensity& q);

//! Method of moments. Throws BetaFitInfeasible unless C > 0, 0 < A < 1 and A(1-A)/C > 1.
BetaParams beta_mom(const MomentEstimates& m);

//! Integrals that enter the AMISE, over [delta, 1 - delta].
struct MiseFunctionals
{
  double bias_integral = 0.0;     //!< int reduced_bias^2
  double variance_integral = 0.0; //!< int F(1 - F)/q
};

inline constexpr double kBandwidthTrim = 1e-3;

MiseFunctionals mise_functionals(const TheoreticalExpansion& te, double delta = kBandwidthTrim);

struct OptimalBandwidth
{
  double h = 0.0;
  MiseFunctionals functionals;
};

/// Minimizer of mise_expansion() on the unit interval:
/// h^7 = 3 int w'^2 int F(1-F)/q / (n mu_2^2 int reduced_bias^2).
/// Throws DegenerateBandwidth when the bias integral vanishes.
OptimalBandwidth h_opt(const TheoreticalExpansion& te, double n, double delta = kBandwidthTrim);

//! h^4/4 mu_2^2 int reduced_bias^2 + int w'^2 int F(1-F)/q / (n h^3)
double mise_expansion(const TheoreticalExpansion& te, double n, double h, double delta = kBandwidthTrim);

//! The three cross integrals of R = reduced_bias and S = f q''/q, plus int F(1-F)/q.
struct UnknownQFunctionals
{
  double RR = 0.0;
  double RS = 0.0;
  double SS = 0.0;
  double variance_integral = 0.0;
};

UnknownQFunctionals unknown_q_functionals(const TheoreticalExpansion& te, double delta = kBandwidthTrim);

//! AMISE with the squared bias of (h^2 R - htilde^2 S) mu_2 / 2.
double mise_unknown_q(const UnknownQFunctionals& fn,
                      const KernelFunctionals& k,
                      double n,
                      double h,
                      double htilde);

//! Root of d/dh mise_unknown_q on the unit interval.
double h_opt_unknown_q(const UnknownQFunctionals& fn,
                       const KernelFunctionals& k,
                       double n,
                       double htilde);

enum class SelectorKind
{
  fixed,
  beta_reference,
  rule_of_thumb
};

struct BandwidthSelector
{
  SelectorKind kind = SelectorKind::beta_reference;
  double value = 0.0; //!< fixed bandwidth

  //! "fixed:<h>", "beta-reference" or "rule-of-thumb"
  static BandwidthSelector parse(std::string_view spec);
  std::string spec() const;
};

struct BandwidthReport
{
  double h = 0.0; //!< in the units of the support
  std::string method;
  std::optional<MomentEstimates> moments;
  std::optional<BetaParams> beta;
  double bias_integral = 0.0;
  double variance_integral = 0.0;
  std::vector<std::string> warnings;
};

struct ReferenceOptions
{
  //! q used in the moment step; defaults to the q passed for the bias step.
  std::optional<ObservationDensity> moment_q;
  double delta = kBandwidthTrim;
};

//! 0.5 sd(V) n^(-1/7)
double rule_of_thumb(const TransformedSample& V, double n);

/// Beta-reference plug-in bandwidth for the density estimator. Falls back to
/// rule_of_thumb() with a warning when the Beta fit is infeasible, when the
/// fitted reference is flat, or when the bias integral degenerates.
BandwidthReport reference_bandwidth(const TransformedSample& V,
                                    const ObservationDensity& q,
                                    const Kernel& k,
                                    double n,
                                    const ReferenceOptions& opts = {});

BandwidthReport select_bandwidth(const BandwidthSelector& sel,
                                 const TransformedSample& V,
                                 const ObservationDensity& q,
                                 const Kernel& k,
                                 double n,
                                 const ReferenceOptions& opts = {});

} // namespace cskde
