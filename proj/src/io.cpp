#include "cskde/io.hpp"

#include "cskde/errors.hpp"
#include "cskde/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <unistd.h>

namespace cskde {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos)
      return out;
    line.remove_prefix(pos + 1);
  }
}

std::string_view chomp(std::string_view s)
{
  if (!s.empty() && s.back() == '\r')
    s.remove_suffix(1);
  return s;
}

std::string list_lines(const std::vector<std::size_t>& lines)
{
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(lines.size(), 20);
  for (std::size_t i = 0; i < shown; ++i)
    os << (i ? ", " : "") << lines[i];
  if (lines.size() > shown)
    os << ", ... (" << lines.size() << " in total)";
  return os.str();
}

} // namespace

CurrentStatusSample read_css_csv(std::istream& in, Support support)
{
  support.validate();
  std::string line;
  if (!std::getline(in, line))
    throw DataError("input is empty; expected a 't,delta' header");
  const auto header = split(chomp(line), ',');
  if (header.size() < 2 || header.size() > 3 || header[0] != "t" || header[1] != "delta" ||
      (header.size() == 3 && header[2] != "x"))
    throw DataError("line 1: header must be 't,delta' or 't,delta,x'", { 1 });

  CurrentStatusSample s;
  s.support = support;
  std::vector<std::size_t> bad;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = chomp(line);
    if (text.empty())
      continue;
    const auto cols = split(text, ',');
    if (cols.size() != header.size()) {
      bad.push_back(lineno);
      continue;
    }
    const auto t = parse_double(cols[0]);
    const bool delta_ok = cols[1] == "0" || cols[1] == "1";
    if (!t || !std::isfinite(*t) || !support.contains(*t) || !delta_ok) {
      bad.push_back(lineno);
      continue;
    }
    s.times.push_back(*t);
    s.statuses.push_back(cols[1] == "1" ? 1 : 0);
  }
  if (!bad.empty())
    throw DataError("malformed rows (need t in [" + format_double(support.a) + ", " +
                      format_double(support.b) + "] and delta in {0, 1}) at line(s) " + list_lines(bad),
                    bad);
  if (s.times.empty())
    throw DataError("input has no data rows");
  return s;
}

CurrentStatusSample read_css_file(const std::string& path, Support support)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open input file '" + path + "'");
  return read_css_csv(in, support);
}

void write_css_csv(std::ostream& out, const CurrentStatusSample& s, const std::vector<double>* x)
{
  if (x && x->size() != s.size())
    throw ValidationError("hidden event times do not match the sample length");
  out << (x ? "t,delta,x\n" : "t,delta\n");
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.times[i]) << ',' << static_cast<int>(s.statuses[i]);
    if (x)
      out << ',' << format_double((*x)[i]);
    out << '\n';
  }
}

CurveTarget parse_curve_target(std::string_view s)
{
  if (s == "density")
    return CurveTarget::density;
  if (s == "cdf")
    return CurveTarget::cdf;
  if (s == "both")
    return CurveTarget::both;
  throw ValidationError("unknown target '" + std::string(s) + "' (expected density | cdf | both)");
}

std::string_view curve_target_name(CurveTarget t)
{
  switch (t) {
    case CurveTarget::density:
      return "density";
    case CurveTarget::cdf:
      return "cdf";
    case CurveTarget::both:
      return "both";
  }
  return {};
}

void write_curves_csv(std::ostream& out, const CurveSet& c, CurveTarget target)
{
  const bool dens = target != CurveTarget::cdf;
  const bool cdf = target != CurveTarget::density;
  out << 'x';
  if (dens)
    out << ",f_minus,f_plus,f_final";
  if (cdf)
    out << ",F_minus,F_plus,F_half";
  out << '\n';
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    out << format_double(c.x[i]);
    if (dens)
      out << ',' << format_double(c.f_minus[i]) << ',' << format_double(c.f_plus[i]) << ','
          << format_double(c.f_final[i]);
    if (cdf)
      out << ',' << format_double(c.F_minus[i]) << ',' << format_double(c.F_plus[i]) << ','
          << format_double(c.F_combined[i]);
    out << '\n';
  }
}

void write_report_csv(std::ostream& out, const ReplicationReport& r)
{
  out << "x,f_true,F_true";
  for (const auto& [name, _] : r.curves)
    out << ',' << name << "_mean," << name << "_var";
  out << '\n';
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    out << format_double(r.x[i]) << ',' << format_double(r.f_true[i]) << ',' << format_double(r.F_true[i]);
    for (const auto& [_, c] : r.curves)
      out << ',' << format_double(c.mean[i]) << ',' << format_double(c.variance[i]);
    out << '\n';
  }
}

Support parse_support(std::string_view s)
{
  const auto parts = split(s, ',');
  if (parts.size() == 2) {
    const auto a = parse_double(parts[0]);
    const auto b = parse_double(parts[1]);
    if (a && b && std::isfinite(*a) && std::isfinite(*b) && *a < *b)
      return { *a, *b };
  }
  throw ValidationError("support must be 'a,b' with a < b, got '" + std::string(s) + "'");
}

using nlohmann::ordered_json;

ordered_json to_json(const ScenarioConfig& c)
{
  return ordered_json{ { "n", c.n },
                       { "reps", c.reps },
                       { "f_family", c.f_family },
                       { "q_family", c.q_family },
                       { "grid_points", c.x_grid.size() },
                       { "grid_min", c.x_grid.front() },
                       { "grid_max", c.x_grid.back() },
                       { "h1", c.h1 },
                       { "h2", c.h2 },
                       { "unknown_q", c.unknown_q },
                       { "htilde", c.htilde },
                       { "master_seed", c.master_seed },
                       { "warp", c.warp },
                       { "warp_fraction", c.warp_fraction },
                       { "ise_range", { c.ise_lo, c.ise_hi } } };
}

ordered_json to_json(const ReplicationReport& r)
{
  ordered_json j;
  j["config"] = to_json(r.config);
  j["completed"] = r.completed;
  j["failures"] = ordered_json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({ { "rep", f.rep }, { "message", f.message } });
  ordered_json ise = ordered_json::object();
  for (const auto& [name, v] : r.ise) {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted.empty() ? std::nan("")
                                      : (sorted.size() % 2 ? sorted[sorted.size() / 2]
                                                           : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                                                    sorted[sorted.size() / 2]));
    ise[name] = { { "median", med }, { "per_rep", v } };
  }
  j["ise"] = ise;
  ordered_json theory = ordered_json::object();
  for (const auto& [name, c] : r.theory)
    theory[name] = { { "mean", c.mean }, { "variance", c.variance } };
  j["x"] = r.x;
  j["f_true"] = r.f_true;
  j["F_true"] = r.F_true;
  ordered_json curves = ordered_json::object();
  for (const auto& [name, c] : r.curves)
    curves[name] = { { "mean", c.mean }, { "variance", c.variance } };
  j["curves"] = curves;
  j["theory"] = theory;
  return j;
}

ordered_json to_json(const VerificationReport& r)
{
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({ { "name", c.name },
                       { "rule", c.rule },
                       { "observed", c.observed },
                       { "predicted", c.predicted },
                       { "tolerance", c.tolerance },
                       { "mc_se", c.mc_se },
                       { "pass", c.pass } });
  return ordered_json{ { "theorem", r.theorem },
                       { "profile", profile_name(r.profile) },
                       { "seed", r.seed },
                       { "n", r.n },
                       { "reps", r.reps },
                       { "pass", r.pass() },
                       { "checks", checks } };
}

ordered_json to_json(const BandwidthReport& r)
{
  ordered_json j{ { "h", r.h }, { "method", r.method } };
  if (r.moments)
    j["moments"] = { { "A", r.moments->A }, { "B", r.moments->B }, { "C", r.moments->C } };
  if (r.beta)
    j["beta"] = { { "alpha", r.beta->alpha }, { "beta", r.beta->beta } };
  if (r.method == "beta-reference") {
    j["bias_integral"] = r.bias_integral;
    j["variance_integral"] = r.variance_integral;
  }
  j["warnings"] = r.warnings;
  return j;
}

ordered_json to_json(const CouplingDiagnostics& d)
{
  return ordered_json{ { "h1_floor", d.h1_floor },
                       { "h1_ok", d.h1_ok },
                       { "h2_target", d.h2_target },
                       { "h2_ok", d.h2_ok } };
}

std::string dump(const ordered_json& j)
{
  return j.dump(2) + "\n";
}

void require_writable(const std::string& path)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path p(path);
  if (fs::is_directory(p, ec))
    throw DataError("output path '" + path + "' is a directory");
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(dir, ec))
    throw DataError("output directory '" + dir.string() + "' does not exist");
  if (::access(dir.c_str(), W_OK) != 0 || (fs::exists(p, ec) && ::access(p.c_str(), W_OK) != 0))
    throw DataError("output path '" + path + "' is not writable");
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw DataError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out)
    throw DataError("failed writing '" + path + "'");
}

} // namespace cskde
