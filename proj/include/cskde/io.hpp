#pragma once

#include "cskde/bandwidth.hpp"
#include "cskde/cdf.hpp"
#include "cskde/curves.hpp"
#include "cskde/simulation.hpp"
#include "cskde/transform.hpp"
#include "cskde/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace cskde {

/// Reads "t,delta" or "t,delta,x" CSV (header required; a trailing x column
/// is ignored). Throws DataError listing the 1-based line numbers of every
/// malformed row, and for input without data rows.
CurrentStatusSample read_css_csv(std::istream& in, Support support = {});
CurrentStatusSample read_css_file(const std::string& path, Support support = {});

//! Header `t,delta` (or `t,delta,x` when hidden event times are given), LF endings.
void write_css_csv(std::ostream& out, const CurrentStatusSample& s, const std::vector<double>* x = nullptr);

enum class CurveTarget
{
  density,
  cdf,
  both
};

CurveTarget parse_curve_target(std::string_view s);
std::string_view curve_target_name(CurveTarget t);

//! x then f_minus,f_plus,f_final and/or F_minus,F_plus,F_half.
void write_curves_csv(std::ostream& out, const CurveSet& c, CurveTarget target);

//! One row per grid x: x, f_true, F_true, then mean and variance of each estimator.
void write_report_csv(std::ostream& out, const ReplicationReport& r);

//! "a,b" with a < b.
Support parse_support(std::string_view s);

nlohmann::ordered_json to_json(const ScenarioConfig& c);
nlohmann::ordered_json to_json(const ReplicationReport& r);
nlohmann::ordered_json to_json(const VerificationReport& r);
nlohmann::ordered_json to_json(const BandwidthReport& r);
nlohmann::ordered_json to_json(const CouplingDiagnostics& d);

//! Two-space indented JSON followed by a newline.
std::string dump(const nlohmann::ordered_json& j);

//! Throws DataError when `path` cannot be created for writing (checked before any compute).
void require_writable(const std::string& path);
//! Writes the whole buffer; throws DataError on failure.
void write_file(const std::string& path, const std::string& content);

} // namespace cskde
