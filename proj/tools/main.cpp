// hcdc: plan, simulate, sweep and verify hypercube coded distributed computing runs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hcdc/cli.hpp"

namespace {

using namespace hcdc;
using namespace hcdc::cli;

// Values as typed on the command line; applied over the config file only
// when the flag was actually given.
struct Flags {
  int x = 0, d = 0, eta1 = 0, eta2 = 0, rounds = 0;
  std::string s, policy, format, out, config;
  std::size_t t_bytes = 0;
  std::uint64_t seed = 0;
  int x_min = 0, x_max = 0, d_min = 0, d_max = 0;
};

template <typename T>
void overlay(const CLI::Option* opt, T& dst, const T& src) {
  if (opt->count() > 0) dst = src;
}

int fail_config(const std::string& what) {
  std::cerr << "error: " << what << '\n';
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercube coded distributed computing simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  bool inject_fault = false;
  bool simulate_cols = false;
  auto* o_x = app.add_option("--x", f.x, "points per dimension");
  auto* o_d = app.add_option("--d", f.d, "dimensions (r for s=1)");
  auto* o_eta1 = app.add_option("--eta1", f.eta1, "files per lattice point");
  auto* o_eta2 = app.add_option("--eta2", f.eta2, "functions per node (s=1) or per point (s=d)");
  auto* o_s = app.add_option("--s", f.s, "reducers per function: 1 or d");
  auto* o_policy = app.add_option("--policy", f.policy, "map policy: necessary or all");
  auto* o_t = app.add_option("--T", f.t_bytes, "bytes per intermediate value (default: minimal for d)");
  auto* o_seed = app.add_option("--seed", f.seed, "seed for values and coding coefficients");
  auto* o_rounds = app.add_option("--rounds", f.rounds, "chained rounds (s=d, eta1 = eta2)");
  auto* o_format = app.add_option("--format", f.format, "human, json or csv");
  auto* o_out = app.add_option("--out", f.out, "write the report to this path");
  app.add_option("--config", f.config, "JSON config file; flags override it");
  auto* o_fault = app.add_flag("--inject-fault", inject_fault, "corrupt one delivered byte before verification");

  app.add_subcommand("plan", "print the placement and minimum requirements");
  app.add_subcommand("simulate", "run map, shuffle and reduce and compare with the closed forms");
  auto* sweep_cmd = app.add_subcommand("sweep", "closed-form loads over a grid of (x, d)");
  auto* o_xmin = sweep_cmd->add_option("--x-min", f.x_min, "smallest x (default 2)");
  auto* o_xmax = sweep_cmd->add_option("--x-max", f.x_max, "largest x (default 6)");
  auto* o_dmin = sweep_cmd->add_option("--d-min", f.d_min, "smallest d (default 2)");
  auto* o_dmax = sweep_cmd->add_option("--d-max", f.d_max, "largest d (default 4)");
  auto* o_sim = sweep_cmd->add_flag("--simulate", simulate_cols, "add simulated columns where QN <= 1e5");
  app.add_subcommand("verify", "run the invariant suite over five seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail_config(std::string("config: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (!f.config.empty()) cfg = load_config_file(f.config);
    overlay(o_x, cfg.x, f.x);
    overlay(o_d, cfg.d, f.d);
    overlay(o_eta1, cfg.eta1, f.eta1);
    overlay(o_eta2, cfg.eta2, f.eta2);
    if (o_s->count()) cfg.s_mode = parse_s(f.s);
    if (o_policy->count()) cfg.policy = parse_policy(f.policy);
    if (o_t->count()) cfg.t_bytes = f.t_bytes;
    overlay(o_seed, cfg.seed, f.seed);
    overlay(o_rounds, cfg.rounds, f.rounds);
    if (o_format->count()) cfg.format = parse_format(f.format);
    if (o_out->count()) cfg.out = f.out;
    if (o_fault->count()) cfg.inject_fault = true;
    overlay(o_xmin, cfg.grid.x_lo, f.x_min);
    overlay(o_xmax, cfg.grid.x_hi, f.x_max);
    overlay(o_dmin, cfg.grid.d_lo, f.d_min);
    overlay(o_dmax, cfg.grid.d_hi, f.d_max);
    if (o_sim->count()) cfg.sweep_simulate = true;
  } catch (const ConfigError& e) {
    return fail_config(e.what());
  }

  const std::string name = app.get_subcommands().front()->get_name();
  CommandResult result;
  try {
    if (name == "plan") {
      result = cmd_plan(cfg);
    } else if (name == "simulate") {
      result = cmd_simulate(cfg);
    } else if (name == "sweep") {
      result = cmd_sweep(cfg);
    } else {
      result = cmd_verify(cfg);
    }
  } catch (const ConfigError& e) {
    return fail_config(e.what());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }

  if (cfg.out) {
    std::ofstream out(*cfg.out, std::ios::binary);
    if (!out) return fail_config("config: cannot write '" + *cfg.out + "'");
    out << result.output;
  } else {
    std::cout << result.output;
  }
  return result.exit_code;
}
