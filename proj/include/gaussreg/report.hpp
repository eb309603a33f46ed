// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaussreg/harness.hpp"
#include "gaussreg/measures.hpp"
#include "gaussreg/smoothness.hpp"

namespace gaussreg {

inline constexpr int kReportSchemaVersion = 1;

/// One uniform report row. Numbers are written with %.17g so a re-run with
/// the same configuration reproduces the numeric columns byte for byte.
struct ReportRow {
  std::string check_name;
  Params params;
  double lhs = 0.0;
  double lhs_err = 0.0;
  double rhs = 0.0;
  double rhs_err = 0.0;
  std::string verdict;
  double margin = 0.0;
};

struct ReportMetadata {
  int schema_version = kReportSchemaVersion;
  std::string command;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string timestamp;     // UTC, ISO 8601; outside the determinism contract
  std::string git_describe;
};

struct Report {
  ReportMetadata metadata;
  std::vector<ReportRow> rows;

  /// True iff an asserted row failed.
  [[nodiscard]] bool failed() const;
};

[[nodiscard]] ReportRow to_row(const BoundCheck& check);
/// lhs = predicted exponent, rhs = fitted exponent; slack, r^2, constant
/// spread and the sweep go into params.
[[nodiscard]] ReportRow to_row(const ScalingCheck& check);
/// lhs = value at the base resolution, rhs = refined value; report-only.
[[nodiscard]] ReportRow to_row(const std::string& name, Params params, const DistanceReport& d);
/// lhs = alpha_hat, rhs = log C; per-point values go into params; report-only.
[[nodiscard]] ReportRow to_row(const std::string& name, Params params, const BesovFit& fit);

void append_rows(Report& report, const SuiteResult& result);

/// Current UTC time and `git describe --always --dirty` (or "unknown").
[[nodiscard]] std::string utc_timestamp();
[[nodiscard]] std::string git_describe();

[[nodiscard]] std::string format_number(double v);
/// "key=value;key=value" with %.17g values.
[[nodiscard]] std::string format_params(const Params& params);

/// Metadata as leading '#' comment lines, then the header
/// check_name,params,lhs,lhs_err,rhs,rhs_err,verdict,margin and one line per row.
void write_csv(std::ostream& out, const Report& report);
/// {"schema_version", "metadata": {...}, "rows": [{...}, ...]}.
void write_json(std::ostream& out, const Report& report);

/// The CSV body without metadata lines: the part covered by determinism.
[[nodiscard]] std::string numeric_columns(const Report& report);

}  // namespace gaussreg
