// SPDX-License-Identifier: MIT
// Command-line front-end. Thread count defaults to GAUSSREG_THREADS when set.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "gaussreg/cli.hpp"
#include "gaussreg/error.hpp"

namespace {

struct Flags {
  gaussreg::RunConfig config;
  double samples = 1e6;
  std::optional<double> p;
  std::optional<double> theta;
};

void common(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.samples, "Gaussian sample count N (accepts 1e6)")->capture_default_str();
  sub->add_option("--seed", f.config.seed, "RNG seed; identical seeds reproduce identical rows")->capture_default_str();
  sub->add_option("--output", f.config.output, "report path (default: standard output)");
  sub->add_option("--format", f.config.format, "csv or json")->capture_default_str();
}

void exponents(CLI::App* sub, Flags& f) {
  sub->add_option("--p", f.p, "integrability exponent p > 1 of the Sobolev bound");
  sub->add_option("--theta", f.theta, "nondegeneracy moment order theta in (0, 1)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Malliavin-calculus bounds for Gaussian pushforwards"};
  app.require_subcommand(1);
  Flags f;

  auto* analyze = app.add_subcommand("analyze-map", "Sobolev norm, u(., eps), small-ball tails of one map");
  analyze->add_option("--map", f.config.map, "built-in name or JSON map file")->required();
  analyze->add_option("--eps-grid", f.config.eps_grid, "epsilon values")->delimiter(',');
  common(analyze, f);
  exponents(analyze, f);

  auto* distance = app.add_subcommand("distance", "distance between two pushforwards");
  distance->add_option("--map-a", f.config.map_a, "first map")->required();
  distance->add_option("--map-b", f.config.map_b, "second map")->required();
  distance->add_option("--metric", f.config.metric, "tv, kr or k")->capture_default_str();
  common(distance, f);

  auto* sigma = app.add_subcommand("sigma", "shift modulus sigma(mu, t): grid-LP lower and shift-TV upper bound");
  sigma->add_option("--map", f.config.map, "map whose pushforward is measured");
  sigma->add_option("--density", f.config.density, "oracle density: normal, chi2_1, uniform");
  sigma->add_option("--t-grid", f.config.t_grid, "t values (default 0.05,0.1,0.2,0.5)")->delimiter(',');
  common(sigma, f);

  auto* besov = app.add_subcommand("besov", "Nikolskii-Besov exponent fit of a pushforward or oracle density");
  besov->add_option("--map", f.config.map, "map whose pushforward is measured");
  besov->add_option("--density", f.config.density, "oracle density: normal, chi2_1, uniform");
  besov->add_option("--h-grid", f.config.h_grid, "shift sizes h")->delimiter(',');
  common(besov, f);
  exponents(besov, f);

  auto* verify = app.add_subcommand("verify", "run a verification suite; exit 1 iff an asserted check fails");
  verify->add_option("--suite", f.config.suite,
                     "identities, ibp, distances, modulus, besov, scaling, demos or all")
      ->capture_default_str();
  verify->add_option("--t-grid", f.config.t_grid, "t values of the scaling sweeps")->delimiter(',');
  verify->add_option("--eps-grid", f.config.eps_grid, "epsilon values of the identity checks")->delimiter(',');
  verify->add_option("--h-grid", f.config.h_grid, "shift sizes of the Besov fits")->delimiter(',');
  common(verify, f);
  exponents(verify, f);

  auto* demo = app.add_subcommand("demo-sequence", "convergence in variation of a catalog sequence");
  demo->add_option("--sequence", f.config.sequence, "perturbed_1d, perturbed_2d, vanishing_1d, vanishing_2d")
      ->required();
  common(demo, f);
  exponents(demo, f);

  auto* list = app.add_subcommand("list", "built-in maps and oracle densities");

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : app.get_subcommands()) f.config.command = sub->get_name();
  if (!(f.samples >= 0.0) || !std::isfinite(f.samples) || f.samples != std::floor(f.samples)) {
    std::cerr << "ConfigParse: samples: --n must be a nonnegative integer\n";
    return 2;
  }
  f.config.samples = static_cast<std::size_t>(f.samples);
  f.config.p = f.p;
  f.config.theta = f.theta;
  (void)list;

  try {
    const gaussreg::RunOutcome out = gaussreg::run(f.config);
    if (f.config.command == "list") {
      std::cout << out.text;
      return 0;
    }
    if (f.config.output.empty()) {
      gaussreg::emit(std::cout, out.report, f.config.format);
    } else {
      std::ofstream file(f.config.output);
      if (!file) {
        std::cerr << "ConfigParse: output: cannot open '" << f.config.output << "'\n";
        return 2;
      }
      gaussreg::emit(file, out.report, f.config.format);
    }
    return out.exit_status;
  } catch (const gaussreg::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
