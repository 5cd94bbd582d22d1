#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sparsevb::cli {

// Shared fitting flags. b0 defaults to the effective column count of the
// design the fit runs on (after --normalize appends the intercept).
struct FitFlags {
  double lambda = 1.0;
  double a0 = 1.0;
  std::optional<double> b0;
  double epsilon = 1e-5;
  int max_sweeps = 1000;
  std::string order = "prioritized";  // prioritized | lex | random
  std::uint64_t seed = 0;
  bool track_elbo = false;
};

struct FitArgs {
  std::string x_path;
  std::string y_path;
  std::string engine = "laplace";  // laplace | qmf | gauss | gauss-batch
  FitFlags fit;
  std::optional<double> known_sigma;
  bool estimate_sigma = false;
  bool normalize = false;
  std::string out;  // empty: stdout
};

struct SimulateArgs {
  std::string scenario_path;
  std::string engine = "laplace";  // simulate/compare also accept gauss-rescaled
  std::string order = "prioritized";
  std::optional<int> replicates;
  std::string out_dir = ".";
};

struct CompareArgs {
  std::string scenario_path;
  std::vector<std::string> engines;  // default laplace
  std::vector<std::string> orders;   // default prioritized
  std::optional<int> replicates;
  std::string out = "compare.csv";
};

struct DiagnoseArgs {
  std::string x_path;
  int s_max = 3;
  std::string out;  // empty: stdout
};

int run_fit(const FitArgs& args);
int run_simulate(const SimulateArgs& args);
int run_compare(const CompareArgs& args);
int run_diagnose(const DiagnoseArgs& args);

}  // namespace sparsevb::cli
