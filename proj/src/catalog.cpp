// SPDX-License-Identifier: MIT
#include "gaussreg/catalog.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gaussreg/error.hpp"
#include "json.hpp"

namespace gaussreg {
namespace {

using Terms = std::vector<Monomial>;

MapSpec poly(const std::string& name, std::size_t n, std::vector<Terms> comps) {
  return MapSpec(name, PolynomialMap(n, std::move(comps)));
}

Monomial mono(std::vector<int> e, double c) { return Monomial{std::move(e), c}; }

int parse_index(const std::string& name, std::size_t colon) {
  const std::string digits = name.substr(colon + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::kUnknownMap, "bad sequence index in '" + name + "'");
  }
  const int n = std::stoi(digits);
  if (n < 1) throw Error(ErrorCode::kUnknownMap, "sequence index must be >= 1 in '" + name + "'");
  return n;
}

}  // namespace

const std::vector<CatalogEntry>& map_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"x1", 1, 1, "pushforward N(0,1)"},
      {"x1_shift_1", 1, 1, "x1 + 1; pushforward N(1,1)"},
      {"x1sq", 1, 1, "x1^2; pushforward chi2_1, |grad f| = 2|x1|"},
      {"const", 1, 1, "constant 1.5; Dirac pushforward, grad f = 0"},
      {"linear_form", 2, 1, "0.6x1 - 0.8x2; pushforward N(0,1)"},
      {"x1x2", 2, 1, "x1*x2; |grad f|^2 = x1^2 + x2^2"},
      {"quad_form", 2, 1, "<Qx,x> = 2x1^2 + x1x2 + x2^2"},
      {"x1_x2", 2, 2, "(x1, x2); Δ_f = 1, pushforward N(0,I2)"},
      {"x1sq_x2", 2, 2, "Δ_f = 4x₁²; (x1^2, x2), degenerate on x1 = 0"},
      {"x1_x1", 2, 2, "(x1, x1); Δ_f = 0 identically"},
      {"rot45", 2, 2, "(x1 + x2, x1 - x2); M_f = 2I, Δ_f = 4"},
      {"hermite1", 1, 1, "He_1(x1) = x1; L f = -f"},
      {"hermite2", 1, 1, "He_2(x1) = x1^2 - 1; L f = -2f"},
      {"hermite3", 1, 1, "He_3(x1) = x1^3 - 3x1; L f = -3f"},
      {"hermite4", 1, 1, "He_4(x1) = x1^4 - 6x1^2 + 3; L f = -4f"},
      {"hermite5", 1, 1, "He_5(x1) = x1^5 - 10x1^3 + 15x1; L f = -5f"},
      {"sin_x1", 1, 1, "sin(x1); bounded, non-polynomial"},
      {"uniform_x1", 1, 1, "Phi(x1); pushforward uniform on (0,1)"},
      {"sin_linear", 2, 2, "(sin(x1 + 0.5x2), sin(x1 - x2)); non-polynomial"},
      {"perturbed_1d:<n>", 2, 1, "x1 + sin(x2)/n; converges to N(0,1) in variation"},
      {"perturbed_2d:<n>", 2, 2, "(x1 + sin(x2)/n, x2); converges to N(0,I2)"},
      {"vanishing_1d:<n>", 2, 1, "x1/n; gradients vanish, bounds become vacuous"},
      {"vanishing_2d:<n>", 2, 2, "(x1/n, x2); Δ_f = 1/n^2 -> 0"},
  };
  return entries;
}

MapSpec hermite_map(int degree) {
  static const std::map<int, Terms> table = {
      {1, {mono({1}, 1.0)}},
      {2, {mono({2}, 1.0), mono({0}, -1.0)}},
      {3, {mono({3}, 1.0), mono({1}, -3.0)}},
      {4, {mono({4}, 1.0), mono({2}, -6.0), mono({0}, 3.0)}},
      {5, {mono({5}, 1.0), mono({3}, -10.0), mono({1}, 15.0)}},
  };
  const auto it = table.find(degree);
  if (it == table.end()) {
    throw Error(ErrorCode::kUnknownMap, "hermite degree must be 1..5");
  }
  return poly("hermite" + std::to_string(degree), 1, {it->second});
}

MapSpec perturbed_sequence_1d(int n) {
  const double inv = 1.0 / n;
  return make_closure_map("perturbed_1d:" + std::to_string(n), 2, 1,
                          [inv](auto x, std::size_t) {
                            using std::sin;
                            return x[0] + sin(x[1]) * inv;
                          });
}

MapSpec perturbed_sequence_2d(int n) {
  const double inv = 1.0 / n;
  return make_closure_map("perturbed_2d:" + std::to_string(n), 2, 2,
                          [inv](auto x, std::size_t c) {
                            using std::sin;
                            return c == 0 ? x[0] + sin(x[1]) * inv : x[1] + 0.0;
                          });
}

MapSpec vanishing_sequence_1d(int n) {
  return poly("vanishing_1d:" + std::to_string(n), 2, {{mono({1, 0}, 1.0 / n)}});
}

MapSpec vanishing_sequence_2d(int n) {
  return poly("vanishing_2d:" + std::to_string(n), 2,
              {{mono({1, 0}, 1.0 / n)}, {mono({0, 1}, 1.0)}});
}

MapSpec builtin_map(const std::string& name) {
  if (name == "x1") return poly(name, 1, {{mono({1}, 1.0)}});
  if (name == "x1_shift_1") return poly(name, 1, {{mono({0}, 1.0), mono({1}, 1.0)}});
  if (name == "x1sq") return poly(name, 1, {{mono({2}, 1.0)}});
  if (name == "const") return poly(name, 1, {{mono({0}, 1.5)}});
  if (name == "linear_form") return poly(name, 2, {{mono({1, 0}, 0.6), mono({0, 1}, -0.8)}});
  if (name == "x1x2") return poly(name, 2, {{mono({1, 1}, 1.0)}});
  if (name == "quad_form") {
    return poly(name, 2, {{mono({2, 0}, 2.0), mono({1, 1}, 1.0), mono({0, 2}, 1.0)}});
  }
  if (name == "x1_x2") return poly(name, 2, {{mono({1, 0}, 1.0)}, {mono({0, 1}, 1.0)}});
  if (name == "x1sq_x2") return poly(name, 2, {{mono({2, 0}, 1.0)}, {mono({0, 1}, 1.0)}});
  if (name == "x1_x1") return poly(name, 2, {{mono({1, 0}, 1.0)}, {mono({1, 0}, 1.0)}});
  if (name == "rot45") {
    return poly(name, 2,
                {{mono({1, 0}, 1.0), mono({0, 1}, 1.0)}, {mono({1, 0}, 1.0), mono({0, 1}, -1.0)}});
  }
  if (name.rfind("hermite", 0) == 0 && name.size() == 8) {
    const char d = name[7];
    if (d >= '1' && d <= '5') return hermite_map(d - '0');
  }
  if (name == "sin_x1") {
    return make_closure_map(name, 1, 1, [](auto x, std::size_t) {
      using std::sin;
      return sin(x[0]);
    });
  }
  if (name == "uniform_x1") {
    return make_closure_map(name, 1, 1, [](auto x, std::size_t) {
      using std::erfc;
      return 0.5 * erfc(-x[0] / std::sqrt(2.0));
    });
  }
  if (name == "sin_linear") {
    return make_closure_map(name, 2, 2, [](auto x, std::size_t c) {
      using std::sin;
      return c == 0 ? sin(x[0] + 0.5 * x[1]) : sin(x[0] - x[1]);
    });
  }
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    const std::string family = name.substr(0, colon);
    if (family == "perturbed_1d") return perturbed_sequence_1d(parse_index(name, colon));
    if (family == "perturbed_2d") return perturbed_sequence_2d(parse_index(name, colon));
    if (family == "vanishing_1d") return vanishing_sequence_1d(parse_index(name, colon));
    if (family == "vanishing_2d") return vanishing_sequence_2d(parse_index(name, colon));
  }
  throw Error(ErrorCode::kUnknownMap, "no built-in map named '" + name + "'");
}

MapSpec map_from_json_text(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigParse, std::string("map config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfigParse, "map config must be an object");
  if (doc.contains("builtin")) {
    if (!doc["builtin"].is_string()) {
      throw Error(ErrorCode::kConfigParse, "field 'builtin' must be a string");
    }
    return builtin_map(doc["builtin"].get<std::string>());
  }
  auto require = [&](const char* field) -> const json& {
    if (!doc.contains(field)) {
      throw Error(ErrorCode::kConfigParse, std::string("missing field '") + field + "'");
    }
    return doc[field];
  };
  const json& name = require("name");
  const json& dim_in = require("dim_in");
  const json& dim_out = require("dim_out");
  const json& comps = require("components");
  if (!name.is_string()) throw Error(ErrorCode::kConfigParse, "field 'name' must be a string");
  if (!dim_in.is_number_unsigned() || dim_in.get<std::size_t>() == 0) {
    throw Error(ErrorCode::kConfigParse, "field 'dim_in' must be a positive integer");
  }
  if (!dim_out.is_number_unsigned() || dim_out.get<std::size_t>() == 0) {
    throw Error(ErrorCode::kConfigParse, "field 'dim_out' must be a positive integer");
  }
  const std::size_t n = dim_in.get<std::size_t>();
  if (!comps.is_array() || comps.size() != dim_out.get<std::size_t>()) {
    throw Error(ErrorCode::kConfigParse, "field 'components' must list dim_out components");
  }
  std::vector<Terms> parsed;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const std::string where = "components[" + std::to_string(c) + "]";
    if (!comps[c].is_array()) throw Error(ErrorCode::kConfigParse, where + " must be an array");
    Terms terms;
    for (std::size_t t = 0; t < comps[c].size(); ++t) {
      const json& term = comps[c][t];
      const std::string at = where + "[" + std::to_string(t) + "]";
      if (!term.is_array() || term.size() != 2 || !term[0].is_array() || !term[1].is_number()) {
        throw Error(ErrorCode::kConfigParse, at + " must be [[exponents...], coeff]");
      }
      if (term[0].size() != n) {
        throw Error(ErrorCode::kConfigParse, at + " exponent vector must have dim_in entries");
      }
      Monomial m;
      for (const json& e : term[0]) {
        if (!e.is_number_unsigned()) {
          throw Error(ErrorCode::kConfigParse, at + " exponents must be nonnegative integers");
        }
        m.exponents.push_back(e.get<int>());
      }
      m.coeff = term[1].get<double>();
      terms.push_back(std::move(m));
    }
    parsed.push_back(std::move(terms));
  }
  try {
    return poly(name.get<std::string>(), n, std::move(parsed));
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigParse, std::string("invalid polynomial: ") + e.what());
  }
}

std::string map_to_json_text(const std::string& name, const PolynomialMap& p) {
  nlohmann::json doc;
  doc["name"] = name;
  doc["dim_in"] = p.dim_in();
  doc["dim_out"] = p.dim_out();
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& terms : p.components()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : terms) arr.push_back(nlohmann::json::array({m.exponents, m.coeff}));
    comps.push_back(arr);
  }
  doc["components"] = comps;
  return doc.dump(2);
}

MapSpec load_map(const std::string& reference) {
  const bool json_suffix =
      reference.size() > 5 && reference.substr(reference.size() - 5) == ".json";
  const bool looks_like_file = reference.find('/') != std::string::npos || json_suffix;
  if (!looks_like_file) return builtin_map(reference);
  std::ifstream in(reference);
  if (!in) throw Error(ErrorCode::kUnknownMap, "cannot open map config '" + reference + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return map_from_json_text(buf.str());
}

MapSpec affine_transform(const MapSpec& map, double scale, std::vector<double> offset) {
  if (offset.size() != map.dim_out()) {
    throw Error(ErrorCode::kDimensionMismatch, "affine offset must have one entry per component");
  }
  std::ostringstream name;
  name << map.name() << "*" << scale;
  for (double o : offset) name << (o < 0 ? "" : "+") << o;
  if (const PolynomialMap* p = map.polynomial()) {
    auto comps = p->components();
    const std::vector<int> zero(p->dim_in(), 0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      bool has_constant = false;
      for (auto& m : comps[c]) {
        m.coeff *= scale;
        if (m.exponents == zero) {
          m.coeff += offset[c];
          has_constant = true;
        }
      }
      if (!has_constant && offset[c] != 0.0) comps[c].push_back(mono(zero, offset[c]));
    }
    return poly(name.str(), p->dim_in(), std::move(comps));
  }
  return MapSpec(
      name.str(), map.dim_in(), map.dim_out(),
      [map, scale, offset](std::span<const double> x, std::size_t c) {
        return scale * map.value(c, x) + offset[c];
      },
      [map, scale, offset](std::span<const Dual2> x, std::size_t c) {
        return scale * map.compose(c, x) + offset[c];
      });
}

}  // namespace gaussreg
