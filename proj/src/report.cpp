// SPDX-License-Identifier: MIT
#include "gaussreg/report.hpp"

#include <array>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace gaussreg {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void add_series(Params& params, const char* key, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    params.emplace_back(std::string(key) + "[" + std::to_string(i) + "]", v[i]);
  }
}

// JSON numbers cannot hold inf or nan; those become strings.
nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

bool Report::failed() const {
  for (const auto& r : rows) {
    if (r.verdict == verdict_name(Verdict::kFail)) return true;
  }
  return false;
}

ReportRow to_row(const BoundCheck& c) {
  return {c.name, c.params, c.lhs, c.lhs_err, c.rhs, c.rhs_err, std::string(verdict_name(c.verdict)), c.margin};
}

ReportRow to_row(const ScalingCheck& c) {
  ReportRow r;
  r.check_name = c.name;
  r.params = c.params;
  r.params.emplace_back("slack", kExponentSlack);
  r.params.emplace_back("r_squared", c.r_squared);
  r.params.emplace_back("constant_spread", c.constant_spread);
  add_series(r.params, "grid", c.grid);
  add_series(r.params, "x", c.x);
  add_series(r.params, "y", c.y);
  r.lhs = c.predicted_exponent;
  r.rhs = c.fitted_exponent;
  r.verdict = verdict_name(c.verdict);
  r.margin = c.fitted_exponent - c.predicted_exponent;
  return r;
}

ReportRow to_row(const std::string& name, Params params, const DistanceReport& d) {
  ReportRow r;
  r.check_name = name;
  r.params = std::move(params);
  r.params.emplace_back("resolution", d.resolution);
  r.params.emplace_back("support_size", static_cast<double>(d.support_size));
  r.params.emplace_back("coarsened", d.coarsened ? 1.0 : 0.0);
  r.lhs = d.value;
  r.lhs_err = d.error_estimate;
  r.rhs = d.refined_value;
  r.verdict = verdict_name(Verdict::kReportOnly);
  r.margin = d.refined_value - d.value;
  return r;
}

ReportRow to_row(const std::string& name, Params params, const BesovFit& fit) {
  ReportRow r;
  r.check_name = name;
  r.params = std::move(params);
  r.params.emplace_back("r_squared", fit.r_squared);
  r.params.emplace_back("used", static_cast<double>(fit.used_count));
  add_series(r.params, "h", fit.h_values);
  add_series(r.params, "tv", fit.tv_values);
  r.lhs = fit.alpha_hat;
  r.rhs = fit.log_C_hat;
  r.verdict = verdict_name(Verdict::kReportOnly);
  r.margin = 0.0;
  return r;
}

void append_rows(Report& report, const SuiteResult& result) {
  for (const auto& b : result.bounds) report.rows.push_back(to_row(b));
  for (const auto& s : result.scalings) report.rows.push_back(to_row(s));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string git_describe() {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen("git describe --always --dirty 2>/dev/null", "r"), pclose);
  if (!pipe) return "unknown";
  std::string out;
  std::array<char, 128> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe.get()) != nullptr) out += buf.data();
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

std::string format_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string format_params(const Params& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ';';
    out += params[i].first;
    out += '=';
    out += format_number(params[i].second);
  }
  return out;
}

std::string numeric_columns(const Report& report) {
  std::ostringstream out;
  out << "check_name,params,lhs,lhs_err,rhs,rhs_err,verdict,margin\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.check_name) << ',' << csv_field(format_params(r.params)) << ',' << format_number(r.lhs) << ','
        << format_number(r.lhs_err) << ',' << format_number(r.rhs) << ',' << format_number(r.rhs_err) << ','
        << r.verdict << ',' << format_number(r.margin) << '\n';
  }
  return out.str();
}

void write_csv(std::ostream& out, const Report& report) {
  const ReportMetadata& m = report.metadata;
  out << "# schema_version=" << m.schema_version << '\n'
      << "# command=" << m.command << '\n'
      << "# seed=" << m.seed << '\n'
      << "# samples=" << m.samples << '\n'
      << "# timestamp=" << m.timestamp << '\n'
      << "# git_describe=" << m.git_describe << '\n';
  out << numeric_columns(report);
}

void write_json(std::ostream& out, const Report& report) {
  const ReportMetadata& m = report.metadata;
  nlohmann::json doc;
  doc["schema_version"] = m.schema_version;
  doc["metadata"] = {{"command", m.command},
                     {"seed", m.seed},
                     {"samples", m.samples},
                     {"timestamp", m.timestamp},
                     {"git_describe", m.git_describe}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.params) {
      std::string key = k;
      for (int n = 2; params.contains(key); ++n) key = k + "#" + std::to_string(n);
      params[key] = json_number(v);
    }
    rows.push_back({{"check_name", r.check_name},
                    {"params", params},
                    {"lhs", json_number(r.lhs)},
                    {"lhs_err", json_number(r.lhs_err)},
                    {"rhs", json_number(r.rhs)},
                    {"rhs_err", json_number(r.rhs_err)},
                    {"verdict", r.verdict},
                    {"margin", json_number(r.margin)}});
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace gaussreg
