#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cskde {

enum class Profile
{
  full,  //!< stated sample sizes, replication counts and tolerances
  quick  //!< n = 2000, M = 200, tolerances widened to 4 Monte Carlo standard errors
};

std::string_view profile_name(Profile p);
Profile parse_profile(std::string_view s);

struct VerifyOptions
{
  Profile profile = Profile::full;
  std::uint64_t seed = 7;
  std::optional<std::size_t> n;    //!< overrides the primary sample size
  std::optional<std::size_t> reps; //!< overrides the primary replication count
};

/// One Monte Carlo comparison. `rule` names how observed is compared with
/// predicted and tolerance:
///   relative   |observed/predicted - 1| <= tolerance
///   abs_below  |observed| < tolerance
///   below      observed < tolerance
///   range      |observed - predicted| <= tolerance
///   at_least   observed >= tolerance
struct CheckResult
{
  std::string name;
  std::string rule;
  double observed = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  double mc_se = 0.0;
  bool pass = false;
};

struct VerificationReport
{
  std::string theorem;
  Profile profile = Profile::full;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
};

//! thm-variance, thm-bias, thm-normality, thm-cdf, thm-unknown-q
const std::vector<std::string>& theorem_names();

//! Throws ValidationError for an unknown name.
VerificationReport verify_theorem(std::string_view name, const VerifyOptions& opts);

std::vector<VerificationReport> verify_all(const VerifyOptions& opts);

} // namespace cskde
