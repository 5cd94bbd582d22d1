#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sparsevb/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void add_fit_flags(CLI::App& cmd, sparsevb::cli::FitFlags& flags) {
  cmd.add_option("--lambda", flags.lambda, "Laplace slab scale")
      ->capture_default_str();
  cmd.add_option("--a0", flags.a0, "Beta prior a0")->capture_default_str();
  cmd.add_option("--b0", flags.b0, "Beta prior b0 (default: number of columns)");
  cmd.add_option("--epsilon", flags.epsilon, "entropy stopping threshold")
      ->capture_default_str();
  cmd.add_option("--max-sweeps", flags.max_sweeps, "sweep cap")
      ->capture_default_str();
  cmd.add_option("--order", flags.order, "update order")
      ->check(CLI::IsMember({"prioritized", "lex", "random"}))
      ->capture_default_str();
  cmd.add_option("--seed", flags.seed, "RNG seed")->capture_default_str();
  cmd.add_flag("--track-elbo", flags.track_elbo,
               "record the negative evidence bound after each sweep "
               "(Laplace-slab engines only)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sparsevb: spike-and-slab variational Bayes for sparse linear regression"};
  app.require_subcommand(1);

  sparsevb::cli::FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a dataset from CSV files");
  fit->add_option("--x", fit_args.x_path, "design matrix CSV")->required();
  fit->add_option("--y", fit_args.y_path, "response CSV (single column)")->required();
  fit->add_option("--engine", fit_args.engine, "fitting engine")
      ->check(CLI::IsMember({"laplace", "qmf", "gauss", "gauss-batch"}))
      ->capture_default_str();
  add_fit_flags(*fit, fit_args.fit);
  CLI::Option* known = fit->add_option("--known-sigma", fit_args.known_sigma,
                                       "known noise sd; data are rescaled by it");
  CLI::Option* estimate =
      fit->add_flag("--estimate-sigma", fit_args.estimate_sigma,
                    "estimate the noise sd (ridge effective-df estimator)");
  known->excludes(estimate);
  estimate->excludes(known);
  fit->add_flag("--normalize", fit_args.normalize,
                "center columns, rescale them to norm sqrt(n), append intercept");
  fit->add_option("--out", fit_args.out, "output JSON path (default: stdout)");

  sparsevb::cli::SimulateArgs sim_args;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run a replicated scenario from a JSON spec");
  simulate->add_option("--scenario", sim_args.scenario_path, "scenario JSON path")
      ->required();
  simulate->add_option("--engine", sim_args.engine, "fitting engine")
      ->check(CLI::IsMember(
          {"laplace", "qmf", "gauss", "gauss-batch", "gauss-rescaled"}))
      ->capture_default_str();
  simulate->add_option("--order", sim_args.order, "update order")
      ->check(CLI::IsMember({"prioritized", "lex", "random"}))
      ->capture_default_str();
  simulate->add_option("--replicates", sim_args.replicates,
                       "override the scenario replicate count");
  simulate->add_option("--out-dir", sim_args.out_dir,
                       "directory for summary.json and replicates.csv")
      ->capture_default_str();

  sparsevb::cli::CompareArgs cmp_args;
  CLI::App* compare = app.add_subcommand(
      "compare", "run a scenario across engines and orders, one CSV row per metric");
  compare->add_option("--scenario", cmp_args.scenario_path, "scenario JSON path")
      ->required();
  compare->add_option("--engines", cmp_args.engines, "engines to compare")
      ->delimiter(',')
      ->check(CLI::IsMember(
          {"laplace", "qmf", "gauss", "gauss-batch", "gauss-rescaled"}));
  compare->add_option("--orders", cmp_args.orders, "orders to compare")
      ->delimiter(',')
      ->check(CLI::IsMember({"prioritized", "lex", "random"}));
  compare->add_option("--replicates", cmp_args.replicates,
                      "override the scenario replicate count");
  compare->add_option("--out", cmp_args.out, "output CSV path")
      ->capture_default_str();

  sparsevb::cli::DiagnoseArgs diag_args;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "design-matrix coherence diagnostics");
  diagnose->add_option("--x", diag_args.x_path, "design matrix CSV")->required();
  diagnose->add_option("--s-max", diag_args.s_max, "largest support size to scan")
      ->capture_default_str();
  diagnose->add_option("--out", diag_args.out, "output JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fit) return sparsevb::cli::run_fit(fit_args);
    if (*simulate) return sparsevb::cli::run_simulate(sim_args);
    if (*compare) return sparsevb::cli::run_compare(cmp_args);
    if (*diagnose) return sparsevb::cli::run_diagnose(diag_args);
    std::cerr << "error: no subcommand selected\n";
    return kExitInput;
  } catch (const sparsevb::InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const sparsevb::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
