// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gaussreg/smooth_maps.hpp"

namespace gaussreg {

struct CatalogEntry {
  std::string name;
  std::size_t dim_in;
  std::size_t dim_out;
  std::string facts;
};

/// Built-in maps with their (n, k) and known closed-form facts.
[[nodiscard]] const std::vector<CatalogEntry>& map_catalog();

/// Built-in map by name; throws UnknownMap.
[[nodiscard]] MapSpec builtin_map(const std::string& name);

/// Resolves a built-in name or a path to a JSON config file.
[[nodiscard]] MapSpec load_map(const std::string& reference);

/// JSON config: {"name", "dim_in", "dim_out", "components": [[[[e...], coeff], ...], ...]}
/// or {"builtin": "<name>"}. Throws ConfigParse naming the offending field.
[[nodiscard]] MapSpec map_from_json_text(const std::string& text);
[[nodiscard]] std::string map_to_json_text(const std::string& name, const PolynomialMap& poly);

/// Probabilists' Hermite polynomial He_m(x1) as a one-variable polynomial map.
[[nodiscard]] MapSpec hermite_map(int degree);

/// Sequence maps used by the convergence demos (index n >= 1).
[[nodiscard]] MapSpec perturbed_sequence_1d(int n);     // x1 + sin(x2)/n on R^2
[[nodiscard]] MapSpec perturbed_sequence_2d(int n);     // (x1 + sin(x2)/n, x2)
[[nodiscard]] MapSpec vanishing_sequence_1d(int n);     // x1/n on R^2
[[nodiscard]] MapSpec vanishing_sequence_2d(int n);     // (x1/n, x2)

/// a * map + b applied componentwise (polynomials stay polynomial).
[[nodiscard]] MapSpec affine_transform(const MapSpec& map, double scale, std::vector<double> offset);

}  // namespace gaussreg
