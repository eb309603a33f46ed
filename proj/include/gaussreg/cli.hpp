// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaussreg/report.hpp"

namespace gaussreg {

/// One invocation of the front-end. Map references are built-in names or
/// paths to JSON map files.
struct RunConfig {
  std::string command;   // analyze-map, distance, sigma, besov, verify, demo-sequence, list
  std::string map;       // analyze-map, sigma, besov
  std::string map_a;     // distance
  std::string map_b;
  std::string density;   // sigma, besov: oracle density instead of a map
  std::string metric = "tv";  // tv, kr, k
  std::string suite = "all";
  std::string sequence;  // perturbed_1d, perturbed_2d, vanishing_1d, vanishing_2d
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<double> p;
  std::optional<double> theta;
  std::vector<double> eps_grid;
  std::vector<double> t_grid;
  std::vector<double> h_grid;
  std::string output;          // empty: standard output
  std::string format = "csv";  // csv, json
};

inline constexpr std::size_t kMinSamples = 1000;

[[nodiscard]] const std::vector<std::string>& command_names();

/// Throws ConfigParse naming the offending field, or UnknownMap /
/// UnknownDensity for references that do not resolve.
void validate(const RunConfig& config);

struct RunOutcome {
  Report report;
  std::string text;     // plain-text output (list)
  int exit_status = 0;  // 1 iff an asserted check failed
};

/// Validates, executes the command and fills the report metadata. Vacuous
/// and report-only rows never affect the exit status.
[[nodiscard]] RunOutcome run(const RunConfig& config);

/// Writes the report in the configured format.
void emit(std::ostream& out, const Report& report, const std::string& format);

/// Built-in maps and oracle densities with their (n, k) and closed-form facts.
[[nodiscard]] std::string list_catalog();

}  // namespace gaussreg
