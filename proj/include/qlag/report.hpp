#pragma once

// Serialisation of a VerificationReport.

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qlag/error.hpp"
#include "qlag/quaternion.hpp"
#include "qlag/suite.hpp"

namespace qlag {

enum class ReportFormat { Json, Table, CsvProfiles };

inline ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "table") return ReportFormat::Table;
  if (s == "csv-profiles") return ReportFormat::CsvProfiles;
  throw GeometryError(ErrorCode::InvalidArgument, "unknown report format '" + s + "'");
}

/// "%.12g" independent of the global locale.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << v;
  return os.str();
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so the dump is stable across platforms.
inline ordered_json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

inline ordered_json json_triple(const std::array<double, 3>& a) {
  ordered_json out = ordered_json::object();
  for (Structure s : kStructures) out[to_string(s)] = json_number(a[slot_of(s)]);
  return out;
}

inline ordered_json json_range(const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
  return ordered_json{{"min", json_triple(lo)}, {"max", json_triple(hi)}};
}

}  // namespace detail

inline std::string report_json(const VerificationReport& r) {
  using detail::json_number;
  detail::ordered_json doc;
  detail::ordered_json family = detail::ordered_json::object();
  family["kind"] = r.family;
  detail::ordered_json params = detail::ordered_json::object();
  for (const auto& [k, v] : r.family_params) params[k] = v;
  family["params"] = params;
  doc["family"] = family;
  doc["suite"] = r.suite;
  doc["grid"] = {{"per_coord", r.grid.per_coord}, {"step", json_number(r.grid.step)}, {"points", r.grid_points}};
  doc["seed"] = r.seed;
  detail::ordered_json checks = detail::ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"max_residual", json_number(c.max_residual)},
                      {"tolerance", json_number(c.tolerance)},
                      {"pass", c.pass}});
  doc["checks"] = checks;
  detail::ordered_json profiles = detail::ordered_json::object();
  profiles["points"] = r.profiles.rows.size();
  if (!r.profiles.rows.empty()) {
    profiles["lambda"] = detail::json_range(r.profiles.lambda_min, r.profiles.lambda_max);
    profiles["mu"] = detail::json_range(r.profiles.mu_min, r.profiles.mu_max);
    profiles["gamma"] = detail::json_range(r.profiles.gamma_min, r.profiles.gamma_max);
  }
  doc["profiles"] = profiles;
  doc["all_pass"] = r.all_pass();
  doc["wall_ms"] = json_number(r.wall_ms);
  return doc.dump(2) + "\n";
}

inline std::string report_table(const VerificationReport& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "family  " << r.family;
  for (const auto& [k, v] : r.family_params) os << ' ' << k << '=' << v;
  os << "\nsuite   " << r.suite << "\ngrid    " << r.grid.per_coord << " per coordinate (" << r.grid_points
     << " points), step " << format_number(r.grid.step) << "\nseed    " << r.seed << "\n\n";
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  os << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(20) << "max_residual"
     << std::setw(14) << "tolerance" << "result\n";
  for (const auto& c : r.checks)
    os << std::left << std::setw(static_cast<int>(width) + 2) << c.name << std::setw(20) << format_number(c.max_residual)
       << std::setw(14) << format_number(c.tolerance) << (c.pass ? "pass" : "FAIL") << '\n';
  if (!r.profiles.rows.empty()) {
    os << "\nprofile range over " << r.profiles.rows.size() << " points\n";
    auto line = [&](const char* name, const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
      os << "  " << name;
      for (Structure s : kStructures)
        os << "  " << to_string(s) << " [" << format_number(lo[slot_of(s)]) << ", " << format_number(hi[slot_of(s)]) << ']';
      os << '\n';
    };
    line("lambda", r.profiles.lambda_min, r.profiles.lambda_max);
    line("mu    ", r.profiles.mu_min, r.profiles.mu_max);
    line("gamma ", r.profiles.gamma_min, r.profiles.gamma_max);
  }
  const std::size_t passed =
      static_cast<std::size_t>(std::count_if(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; }));
  os << '\n' << passed << '/' << r.checks.size() << " checks passed\n";
  return os.str();
}

inline std::string report_csv_profiles(const VerificationReport& r) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  std::size_t dim = r.profiles.rows.empty() ? 0 : r.profiles.rows.front().point.size();
  for (std::size_t a = 0; a < dim; ++a) os << (a == 0 ? "s" : "u" + std::to_string(a + 1)) << ',';
  for (const char* q : {"lambda", "mu", "gamma"})
    for (Structure s : kStructures) os << q << '_' << to_string(s) << ',';
  os << "curvature\n";
  for (const auto& row : r.profiles.rows) {
    for (double x : row.point) os << format_number(x) << ',';
    for (const auto* arr : {&row.lambda, &row.mu, &row.gamma})
      for (Structure s : kStructures) os << format_number((*arr)[slot_of(s)]) << ',';
    os << format_number(row.curvature) << '\n';
  }
  return os.str();
}

inline std::string emit_report(const VerificationReport& r, ReportFormat fmt) {
  switch (fmt) {
    case ReportFormat::Json: return report_json(r);
    case ReportFormat::Table: return report_table(r);
    case ReportFormat::CsvProfiles: return report_csv_profiles(r);
  }
  return {};
}

}  // namespace qlag
