#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "scenario_json.hpp"
#include "sparsevb/bench.hpp"
#include "sparsevb/cavi.hpp"
#include "sparsevb/data.hpp"
#include "sparsevb/diagnostics.hpp"
#include "sparsevb/errors.hpp"
#include "sparsevb/noise.hpp"
#include "sparsevb/state.hpp"
#include "sparsevb/variants.hpp"

namespace sparsevb::cli {

namespace {

using nlohmann::json;

UpdateOrder parse_order(const std::string& s) {
  if (s == "prioritized") return UpdateOrder::Prioritized;
  if (s == "lex") return UpdateOrder::Lexicographic;
  if (s == "random") return UpdateOrder::Randomized;
  throw InvalidInputError("order must be prioritized, lex, or random; got '" + s + "'");
}

Engine parse_engine(const std::string& s, bool allow_rescaled) {
  if (s == "laplace") return Engine::Laplace;
  if (s == "qmf") return Engine::Qmf;
  if (s == "gauss") return Engine::Gauss;
  if (s == "gauss-batch") return Engine::GaussBatch;
  if (s == "gauss-rescaled") {
    if (allow_rescaled) return Engine::GaussRescaled;
    throw InvalidInputError(
        "engine gauss-rescaled needs the true signal and is only available in "
        "simulate/compare");
  }
  throw InvalidInputError("unknown engine '" + s + "'");
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidInputError("cannot open output file for writing: " + path);
  }
  out << body;
  if (!out) {
    throw InvalidInputError("failed while writing: " + path);
  }
}

void emit_json(const json& j, const std::string& out_path) {
  const std::string body = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << body;
  } else {
    write_text(out_path, body);
    std::cerr << "wrote " << out_path << "\n";
  }
}

// The normalization recipe: center each column, rescale it to Euclidean
// norm sqrt(n), then append an intercept column of ones (itself of norm
// sqrt(n)). Constant columns cannot be rescaled and are rejected.
Matrix normalize_design(const Matrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  const double target = std::sqrt(static_cast<double>(n));
  Matrix out(n, p + 1);
  for (Index j = 0; j < p; ++j) {
    Vector col = X.col(j);
    col.array() -= col.mean();
    const double norm = col.norm();
    if (!(norm > 0.0)) {
      throw InvalidInputError("--normalize: column with 0-based index " +
                              std::to_string(j) +
                              " is constant and cannot be rescaled");
    }
    out.col(j) = col * (target / norm);
  }
  out.col(p).setOnes();
  return out;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json design;
  switch (spec.design.kind) {
    case DesignSpec::Kind::Identity:
      design = {{"kind", "identity"}};
      break;
    case DesignSpec::Kind::IidGaussian:
      design = {{"kind", "iid_gaussian"}, {"tau", spec.design.tau}};
      break;
    case DesignSpec::Kind::Equicorrelated:
      design = {{"kind", "equicorrelated"}, {"rho", spec.design.rho}};
      break;
  }
  json signal;
  switch (spec.signal.kind) {
    case SignalSpec::Kind::Const:
      signal = {{"kind", "const"}, {"amp", spec.signal.amp}};
      break;
    case SignalSpec::Kind::Uniform:
      signal = {{"kind", "uniform"}, {"lo", spec.signal.lo}, {"hi", spec.signal.hi}};
      break;
  }
  const char* placement = "begin";
  switch (spec.placement) {
    case Placement::Begin:
      placement = "begin";
      break;
    case Placement::Middle:
      placement = "middle";
      break;
    case Placement::End:
      placement = "end";
      break;
    case Placement::Random:
      placement = "random";
      break;
  }
  json noise;
  switch (spec.noise.kind) {
    case NoiseSpec::Kind::Gaussian:
      noise = {{"kind", "gaussian"}, {"sd", spec.noise.param}};
      break;
    case NoiseSpec::Kind::Laplace:
      noise = {{"kind", "laplace"}, {"scale", spec.noise.param}};
      break;
    case NoiseSpec::Kind::Uniform:
      noise = {{"kind", "uniform"}, {"half_width", spec.noise.param}};
      break;
    case NoiseSpec::Kind::StudentT3:
      noise = {{"kind", "student_t3"}};
      break;
  }
  json j{{"n", spec.n},
         {"p", spec.p},
         {"s", spec.s},
         {"design", design},
         {"signal", signal},
         {"placement", placement},
         {"noise", noise},
         {"known_variance", spec.known_variance},
         {"replicates", spec.replicates},
         {"seed", spec.seed}};
  if (spec.lambda) j["lambda"] = *spec.lambda;
  return j;
}

std::string replicates_csv(const MetricsReport& report) {
  std::string body = "replicate,l2,fdr,tpr,runtime_s,sweeps,converged\n";
  for (std::size_t k = 0; k < report.records.size(); ++k) {
    const ReplicateRecord& rec = report.records[k];
    body += std::to_string(k) + "," + format_double(rec.l2) + "," +
            format_double(rec.fdr) + "," + format_double(rec.tpr) + "," +
            format_double(rec.runtime_s) + "," + std::to_string(rec.sweeps) + "," +
            (rec.converged ? "1" : "0") + "\n";
  }
  return body;
}

}  // namespace

int run_fit(const FitArgs& args) {
  Matrix X = read_matrix_csv(args.x_path);
  const Vector Y = read_vector_csv(args.y_path);
  if (Y.size() != X.rows()) {
    throw InvalidInputError("dimension mismatch: X has " + std::to_string(X.rows()) +
                            " rows but Y has " + std::to_string(Y.size()));
  }
  if (args.normalize) {
    X = normalize_design(X);
  }
  const Index p = X.cols();
  const double b0 = args.fit.b0.value_or(static_cast<double>(p));

  const auto t0 = std::chrono::steady_clock::now();
  RegressionData data = precompute(X, Y);

  json noise_echo{{"method", "none"}};
  if (args.known_sigma) {
    const NoiseEstimate est =
        estimate_noise_sd(data, NoiseMethod::known(*args.known_sigma));
    data = rescale(data, est);
    noise_echo = {{"method", "known"}, {"sigma_hat", est.sigma_hat}, {"df", est.df}};
  } else if (args.estimate_sigma) {
    const NoiseEstimate est = estimate_noise_sd(data, NoiseMethod::ridge_df());
    data = rescale(data, est);
    noise_echo = {{"method", "ridge_df"}, {"sigma_hat", est.sigma_hat}, {"df", est.df}};
  }

  const Engine engine = parse_engine(args.engine, /*allow_rescaled=*/false);
  PriorConfig prior;
  prior.a0 = args.fit.a0;
  prior.b0 = b0;
  prior.lambda = args.fit.lambda;
  prior.slab = (engine == Engine::Gauss || engine == Engine::GaussBatch)
                   ? SlabFamily::Gaussian
                   : SlabFamily::Laplace;

  FitConfig config;
  config.order = parse_order(args.fit.order);
  config.seed = args.fit.seed;
  config.epsilon = args.fit.epsilon;
  config.max_sweeps = args.fit.max_sweeps;
  config.track_elbo = args.fit.track_elbo;

  FitSummary summary;
  switch (engine) {
    case Engine::Laplace:
      summary = cavi_fit(data, prior, config);
      break;
    case Engine::Qmf:
      summary = qmf_fit(data, prior, config);
      break;
    case Engine::Gauss:
      summary = gauss_componentwise_fit(data, prior, config);
      break;
    case Engine::GaussBatch:
      summary = gauss_batchwise_fit(data, prior, config);
      break;
    case Engine::GaussRescaled:
      throw InvalidInputError("engine gauss-rescaled is not available in fit");
  }
  const double total_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json selected = json::array();
  for (Index i = 0; i < p; ++i) {
    if (summary.state.gamma(i) > 0.5) selected.push_back(i + 1);  // 1-based
  }

  json result{{"mu", vector_to_json(summary.state.mu)},
              {"sigma", vector_to_json(summary.state.sigma)},
              {"gamma", vector_to_json(summary.state.gamma)},
              {"posterior_mean", vector_to_json(posterior_mean(summary.state))},
              {"selected", selected},
              {"sweeps", summary.sweeps},
              {"converged", summary.converged}};
  if (args.fit.track_elbo) {
    result["elbo_trace"] = summary.elbo_trace;
  }

  const json output{{"schema_version", 1},
                    {"config",
                     {{"engine", args.engine},
                      {"order", args.fit.order},
                      {"lambda", args.fit.lambda},
                      {"a0", args.fit.a0},
                      {"b0", b0},
                      {"epsilon", args.fit.epsilon},
                      {"max_sweeps", args.fit.max_sweeps},
                      {"seed", args.fit.seed},
                      {"normalize", args.normalize},
                      {"n", data.n},
                      {"p", data.p},
                      {"noise", noise_echo}}},
                    {"result", result},
                    {"runtime", {{"fit_s", summary.wall_time_s}, {"total_s", total_s}}}};
  emit_json(output, args.out);
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  ScenarioSpec spec = load_scenario(args.scenario_path);
  if (args.replicates) {
    if (*args.replicates < 1) {
      throw InvalidInputError("--replicates must be positive");
    }
    spec.replicates = *args.replicates;
  }
  const Engine engine = parse_engine(args.engine, /*allow_rescaled=*/true);

  FitConfig config;
  config.order = parse_order(args.order);

  const MetricsReport report = run_scenario(spec, engine, config);

  const json summary{
      {"schema_version", 1},
      {"engine", args.engine},
      {"order", args.order},
      {"scenario", scenario_to_json(spec)},
      {"metrics",
       {{"l2_mean", report.l2_mean},
        {"l2_sd", report.l2_sd},
        {"fdr_mean", report.fdr_mean},
        {"fdr_sd", report.fdr_sd},
        {"tpr_mean", report.tpr_mean},
        {"tpr_sd", report.tpr_sd},
        {"replicates_completed", report.replicates_completed}}},
      {"runtime", {{"mean_s", report.runtime_mean_s}, {"sd_s", report.runtime_sd_s}}}};

  std::filesystem::create_directories(args.out_dir);
  const std::string json_path =
      (std::filesystem::path(args.out_dir) / "summary.json").string();
  const std::string csv_path =
      (std::filesystem::path(args.out_dir) / "replicates.csv").string();
  write_text(json_path, summary.dump(2) + "\n");
  write_text(csv_path, replicates_csv(report));

  std::cerr << "wrote " << json_path << " and " << csv_path << "\n";
  std::cout << "l2 " << report.l2_mean << " +- " << report.l2_sd << " | fdr "
            << report.fdr_mean << " +- " << report.fdr_sd << " | tpr "
            << report.tpr_mean << " +- " << report.tpr_sd << "\n";
  return 0;
}

int run_compare(const CompareArgs& args) {
  ScenarioSpec spec = load_scenario(args.scenario_path);
  if (args.replicates) {
    if (*args.replicates < 1) {
      throw InvalidInputError("--replicates must be positive");
    }
    spec.replicates = *args.replicates;
  }

  const std::vector<std::string> engines =
      args.engines.empty() ? std::vector<std::string>{"laplace"} : args.engines;
  const std::vector<std::string> orders =
      args.orders.empty() ? std::vector<std::string>{"prioritized"} : args.orders;

  std::string body = "method,order,metric,mean,sd\n";
  for (const std::string& engine_name : engines) {
    const Engine engine = parse_engine(engine_name, /*allow_rescaled=*/true);
    for (const std::string& order_name : orders) {
      FitConfig config;
      config.order = parse_order(order_name);
      const MetricsReport report = run_scenario(spec, engine, config);
      const auto row = [&](const char* metric, double mean, double sd) {
        body += engine_name + "," + order_name + "," + metric + "," +
                format_double(mean) + "," + format_double(sd) + "\n";
      };
      row("l2", report.l2_mean, report.l2_sd);
      row("fdr", report.fdr_mean, report.fdr_sd);
      row("tpr", report.tpr_mean, report.tpr_sd);
      row("runtime_s", report.runtime_mean_s, report.runtime_sd_s);
    }
  }

  write_text(args.out, body);
  std::cerr << "wrote " << args.out << "\n";
  return 0;
}

int run_diagnose(const DiagnoseArgs& args) {
  const Matrix X = read_matrix_csv(args.x_path);
  const RegressionData data = precompute(X, Vector::Zero(X.rows()));
  const CompatibilityReport report = compatibility_report(data, args.s_max);

  const json output{{"schema_version", 1},
                    {"mc", report.mc},
                    {"x_norm", report.x_norm},
                    {"col_norm_min_ratio", report.col_norm_min_ratio},
                    {"phi_tilde", report.phi_tilde},
                    {"lemma_d1_verified", report.lemma_d1_verified},
                    {"flags", report.flagged}};
  emit_json(output, args.out);
  return 0;
}

}  // namespace sparsevb::cli
