// token_lab: simulation and figure-data CLI for the identical-token timing
// channel.  Subcommands regenerate the capacity-bound and cross-channel
// comparison CSVs, run the Monte Carlo convergence experiment, evaluate
// ordering-entropy quantities on recorded data, and tabulate the
// guard-interval diagnostic.
//
// Exit codes: 0 success, 2 parameter error, 3 I/O error, 4 internal
// numeric-consistency failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tokenlab/csv.hpp"
#include "tokenlab/errors.hpp"
#include "tokenlab/experiments.hpp"
#include "tokenlab/version.hpp"

namespace {

using tokenlab::ExperimentConfig;

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    tokenlab::write_text_file(out_path, content);
}

void add_common(CLI::App* cmd, ExperimentConfig& cfg, std::string& out_path,
                std::string& config_path) {
  cmd->add_option("--seed", cfg.seed, "experiment seed (echoed into outputs)")
      ->capture_default_str();
  cmd->add_option("--out", out_path, "output path (stdout when omitted)");
  cmd->add_option("--config", config_path,
                  "plain key=value config file; flags override file values");
}

// Expands --config into trailing flags for keys not already present, so
// explicit flags win.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw tokenlab::IoError("cannot open config file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw tokenlab::ParameterError("config: expected key=value, got '" + line +
                                     "'");
    std::string flag = "--" + line.substr(0, eq);
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (!present) {
      args.push_back(flag);
      args.push_back(line.substr(eq + 1));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identical-token timing channel laboratory"};
  app.set_version_flag("--version", std::string(tokenlab::kToolName) + " " +
                                        tokenlab::kToolVersion);
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;
  std::string run;

  // bounds
  ExperimentConfig bounds_cfg;
  CLI::App* bounds = app.add_subcommand("bounds", "capacity bound curves vs rho");
  bounds->add_option("--rho-min", bounds_cfg.rho_min)->capture_default_str();
  bounds->add_option("--rho-max", bounds_cfg.rho_max)->capture_default_str();
  bounds->add_option("--points", bounds_cfg.points)->capture_default_str();
  add_common(bounds, bounds_cfg, out_path, config_path);
  bounds->callback([&] { run = "bounds"; });

  // figures
  CLI::App* figures = app.add_subcommand("figures", "figure data generators");
  figures->require_subcommand(1);

  ExperimentConfig cap_cfg;
  cap_cfg.rho_min = 1e-4;
  cap_cfg.rho_max = 1e2;
  std::string cq_choice = "lower";
  CLI::App* capacities =
      figures->add_subcommand("capacities", "timing vs payload channel rates");
  capacities->add_option("--k", cap_cfg.payload_lengths, "payload lengths")
      ->delimiter(',')
      ->capture_default_str();
  capacities->add_option("--n", cap_cfg.parallel_counts, "parallel channel counts")
      ->delimiter(',')
      ->capture_default_str();
  capacities->add_option("--c0", cap_cfg.energy.fabrication_plain)
      ->capture_default_str();
  capacities->add_option("--c1", cap_cfg.energy.fabrication_payload)
      ->capture_default_str();
  capacities->add_option("--dc1", cap_cfg.energy.per_character)
      ->capture_default_str();
  capacities->add_option("--ce", cap_cfg.energy.release_transport)
      ->capture_default_str();
  capacities->add_option("--b", cap_cfg.energy.alphabet)->capture_default_str();
  capacities->add_option("--rho-min", cap_cfg.rho_min)->capture_default_str();
  capacities->add_option("--rho-max", cap_cfg.rho_max)->capture_default_str();
  capacities->add_option("--points", cap_cfg.points)->capture_default_str();
  capacities->add_option("--cq", cq_choice, "bound inside rates: lower|upper")
      ->check(CLI::IsMember({"lower", "upper"}))
      ->capture_default_str();
  add_common(capacities, cap_cfg, out_path, config_path);
  capacities->callback([&] {
    cap_cfg.cq_choice = cq_choice == "upper" ? tokenlab::CqBound::upper
                                             : tokenlab::CqBound::lower;
    run = "capacities";
  });

  ExperimentConfig nvt_cfg;
  CLI::App* nvt = figures->add_subcommand(
      "number-vs-timing", "number/concentration channel vs timing lower bound");
  nvt->add_option("--eps", nvt_cfg.epsilons, "failure probabilities")
      ->delimiter(',')
      ->capture_default_str();
  nvt->add_option("--m-grid", nvt_cfg.token_grid, "token count grid")
      ->delimiter(',');
  nvt->add_option("--points", nvt_cfg.points, "timing curve resolution")
      ->capture_default_str();
  add_common(nvt, nvt_cfg, out_path, config_path);
  nvt->callback([&] { run = "number-vs-timing"; });

  // ordering
  CLI::App* ordering = app.add_subcommand("ordering", "ordering entropy tools");
  ordering->require_subcommand(1);

  ExperimentConfig exact_cfg;
  CLI::App* exact = ordering->add_subcommand(
      "exact", "admissible count / entropy for recorded data");
  exact->add_option("--schedule", exact_cfg.schedule_path, "launch time CSV")
      ->required();
  exact->add_option("--arrivals", exact_cfg.arrivals_path, "arrival time CSV")
      ->required();
  exact->add_option("--dist", exact_cfg.dist, "first-passage spec")
      ->capture_default_str();
  add_common(exact, exact_cfg, out_path, config_path);
  exact->callback([&] { run = "ordering-exact"; });

  ExperimentConfig asym_cfg;
  CLI::App* asymptote =
      ordering->add_subcommand("asymptote", "asymptotic per-token series value");
  asymptote->add_option("--rho", asym_cfg.rho, "channel load")->capture_default_str();
  add_common(asymptote, asym_cfg, out_path, config_path);
  asymptote->callback([&] { run = "ordering-asymptote"; });

  // mc-convergence
  ExperimentConfig mc_cfg;
  CLI::App* mc = app.add_subcommand("mc-convergence",
                                    "finite-M Monte Carlo vs the asymptote");
  mc->add_option("--rho", mc_cfg.rho)->capture_default_str();
  mc->add_option("--trials", mc_cfg.trials)->capture_default_str();
  mc->add_option("--m-grid", mc_cfg.token_grid, "token count grid")->delimiter(',');
  add_common(mc, mc_cfg, out_path, config_path);
  mc->callback([&] { run = "mc-convergence"; });

  // guard-diagnostic
  ExperimentConfig guard_cfg;
  CLI::App* guard = app.add_subcommand(
      "guard-diagnostic", "M*Gbar(guard) table and convergence verdict");
  guard->add_option("--dist", guard_cfg.dist, "first-passage spec")
      ->capture_default_str();
  guard->add_option("--lambda", guard_cfg.intensity)->capture_default_str();
  guard->add_option("--eps", guard_cfg.guard_epsilon)->capture_default_str();
  guard->add_option("--m-grid", guard_cfg.token_grid, "token count grid")
      ->delimiter(',');
  add_common(guard, guard_cfg, out_path, config_path);
  guard->callback([&] { run = "guard-diagnostic"; });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config_file(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const tokenlab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tokenlab::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run == "bounds")
      emit(tokenlab::run_bounds(bounds_cfg), out_path);
    else if (run == "capacities")
      emit(tokenlab::run_capacities(cap_cfg), out_path);
    else if (run == "number-vs-timing")
      emit(tokenlab::run_number_vs_timing(nvt_cfg), out_path);
    else if (run == "ordering-exact")
      emit(tokenlab::run_ordering_exact(exact_cfg), out_path);
    else if (run == "ordering-asymptote")
      emit(tokenlab::run_ordering_asymptote(asym_cfg), out_path);
    else if (run == "mc-convergence")
      emit(tokenlab::run_mc_convergence(mc_cfg), out_path);
    else if (run == "guard-diagnostic")
      emit(tokenlab::run_guard_diagnostic(guard_cfg), out_path);
  } catch (const tokenlab::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tokenlab::NumericConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const tokenlab::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
