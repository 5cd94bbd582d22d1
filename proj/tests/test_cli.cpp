#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

using nlohmann::json;
using testutil::CliResult;
using testutil::make_temp_dir;
using testutil::read_file;
using testutil::run_cli;
using testutil::write_file;

namespace {

const std::string kIdentityX = "1,0\n0,1\n";
const std::string kIdentityY = "5\n0\n";

// Drops the runtime_s column (index 4) from a replicates CSV so byte
// comparisons ignore wall-clock noise.
std::string strip_runtime_column(const std::string& body) {
  std::istringstream in(body);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    std::string rebuilt;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == 4) continue;
      if (!rebuilt.empty()) rebuilt += ",";
      rebuilt += fields[i];
    }
    out += rebuilt + "\n";
  }
  return out;
}

std::string scenario_body() {
  return R"({
  "n": 12, "p": 12, "s": 2,
  "design": {"kind": "identity"},
  "signal": {"kind": "const", "amp": 8.0},
  "placement": "begin",
  "noise": {"kind": "gaussian", "sd": 1.0},
  "known_variance": true,
  "replicates": 2,
  "seed": 3
})";
}

}  // namespace

TEST_CASE("cli fit on the identity design selects the strong coordinate") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);
  const CliResult res = run_cli("fit --x x.csv --y y.csv --b0 2", dir);
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out.at("schema_version") == 1);
  CHECK(out.at("result").at("selected") == json::array({1}));
  CHECK(out.at("result").at("converged") == true);
  CHECK(std::abs(out.at("result").at("mu")[0].get<double>() - 4.0) < 0.01);
  CHECK(out.at("config").at("engine") == "laplace");
  CHECK(out.at("config").at("b0") == 2.0);
  CHECK(out.at("config").at("n") == 2);
  CHECK(out.at("config").at("p") == 2);
  CHECK(out.at("config").at("noise").at("method") == "none");
  CHECK(out.at("runtime").contains("fit_s"));
  CHECK(out.at("runtime").contains("total_s"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit output is identical across reruns apart from runtime") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);
  const std::string cmd = "fit --x x.csv --y y.csv --order random --seed 7";
  const CliResult a = run_cli(cmd, dir);
  const CliResult b = run_cli(cmd, dir);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  json ja = json::parse(a.out);
  json jb = json::parse(b.out);
  ja.erase("runtime");
  jb.erase("runtime");
  CHECK(ja.dump() == jb.dump());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit with unit known sigma matches the no-noise-flag result") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);
  const CliResult plain = run_cli("fit --x x.csv --y y.csv", dir);
  const CliResult known = run_cli("fit --x x.csv --y y.csv --known-sigma 1.0", dir);
  REQUIRE(plain.exit_code == 0);
  REQUIRE(known.exit_code == 0);
  const json jp = json::parse(plain.out);
  const json jk = json::parse(known.out);
  CHECK(jp.at("result") == jk.at("result"));
  CHECK(jk.at("config").at("noise").at("method") == "known");
  CHECK(jk.at("config").at("noise").at("sigma_hat") == 1.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit estimates sigma through the ridge-df path") {
  const auto dir = make_temp_dir();
  // 6 x 2 design with a real noise level.
  write_file(dir / "x.csv",
             "1,0\n0,1\n1,1\n-1,1\n0.5,-1\n2,0.3\n");
  write_file(dir / "y.csv", "1.2\n-0.3\n0.8\n0.1\n0.4\n2.2\n");
  const CliResult res = run_cli("fit --x x.csv --y y.csv --estimate-sigma", dir);
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out.at("config").at("noise").at("method") == "ridge_df");
  CHECK(out.at("config").at("noise").at("df").get<double>() > 0.0);
  CHECK(out.at("config").at("noise").at("sigma_hat").get<double>() > 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit tracks the evidence bound when asked") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);
  const CliResult res = run_cli("fit --x x.csv --y y.csv --track-elbo", dir);
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  const auto& trace = out.at("result").at("elbo_trace");
  REQUIRE(trace.is_array());
  CHECK(trace.size() == out.at("result").at("sweeps").get<std::size_t>() + 1);
  for (std::size_t k = 1; k < trace.size(); ++k) {
    CHECK(trace[k].get<double>() <=
          trace[k - 1].get<double>() +
              1e-8 * (1.0 + std::abs(trace[k - 1].get<double>())));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit normalization appends an intercept column") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", "1,2\n2,1\n3,5\n4,0\n");
  write_file(dir / "y.csv", "1\n2\n3\n4\n");
  const CliResult res = run_cli("fit --x x.csv --y y.csv --normalize", dir);
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out.at("config").at("p") == 3);
  CHECK(out.at("config").at("b0") == 3.0);
  CHECK(out.at("result").at("mu").size() == 3);

  // A constant column cannot be centered and scaled.
  write_file(dir / "xc.csv", "1,7\n2,7\n3,7\n4,7\n");
  const CliResult bad = run_cli("fit --x xc.csv --y y.csv --normalize", dir);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("constant") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli fit input failures exit with code 2") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);

  SUBCASE("ragged csv") {
    write_file(dir / "bad.csv", "1,2\n3\n");
    const CliResult res = run_cli("fit --x bad.csv --y y.csv", dir);
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("error") != std::string::npos);
  }
  SUBCASE("missing file") {
    const CliResult res = run_cli("fit --x nope.csv --y y.csv", dir);
    CHECK(res.exit_code == 2);
  }
  SUBCASE("dimension mismatch") {
    write_file(dir / "y3.csv", "1\n2\n3\n");
    const CliResult res = run_cli("fit --x x.csv --y y3.csv", dir);
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("dimension mismatch") != std::string::npos);
  }
  SUBCASE("track-elbo is Laplace-only") {
    const CliResult res =
        run_cli("fit --x x.csv --y y.csv --engine gauss --track-elbo", dir);
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("track_elbo") != std::string::npos);
  }
  SUBCASE("gauss-rescaled is not a data-fitting engine") {
    const CliResult res =
        run_cli("fit --x x.csv --y y.csv --engine gauss-rescaled", dir);
    CHECK(res.exit_code == 2);
  }
  SUBCASE("known and estimated sigma are mutually exclusive") {
    const CliResult res =
        run_cli("fit --x x.csv --y y.csv --known-sigma 1 --estimate-sigma", dir);
    CHECK(res.exit_code == 2);
  }
  SUBCASE("missing subcommand") {
    const CliResult res = run_cli("", dir);
    CHECK(res.exit_code == 2);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli simulate writes a summary and per-replicate csv") {
  const auto dir = make_temp_dir();
  write_file(dir / "scenario.json", scenario_body());
  const CliResult res =
      run_cli("simulate --scenario scenario.json --out-dir out", dir);
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.find("l2 ") != std::string::npos);
  CHECK(res.out.find("| tpr ") != std::string::npos);

  const json summary = json::parse(read_file(dir / "out" / "summary.json"));
  CHECK(summary.at("schema_version") == 1);
  CHECK(summary.at("engine") == "laplace");
  CHECK(summary.at("order") == "prioritized");
  CHECK(summary.at("scenario").at("n") == 12);
  CHECK(summary.at("metrics").at("replicates_completed") == 2);
  CHECK(summary.at("metrics").at("tpr_mean") == 1.0);
  CHECK(summary.at("runtime").contains("mean_s"));

  const std::string csv = read_file(dir / "out" / "replicates.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "replicate,l2,fdr,tpr,runtime_s,sweeps,converged");
  std::string row0;
  std::getline(lines, row0);
  CHECK(row0.rfind("0,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli simulate reruns are byte-identical apart from runtimes") {
  const auto dir = make_temp_dir();
  write_file(dir / "scenario.json", scenario_body());
  const CliResult a =
      run_cli("simulate --scenario scenario.json --out-dir a", dir);
  const CliResult b =
      run_cli("simulate --scenario scenario.json --out-dir b", dir);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);

  json ja = json::parse(read_file(dir / "a" / "summary.json"));
  json jb = json::parse(read_file(dir / "b" / "summary.json"));
  ja.erase("runtime");
  jb.erase("runtime");
  CHECK(ja.dump() == jb.dump());

  const std::string csv_a = strip_runtime_column(read_file(dir / "a" / "replicates.csv"));
  const std::string csv_b = strip_runtime_column(read_file(dir / "b" / "replicates.csv"));
  CHECK(csv_a == csv_b);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli simulate with one replicate reports zero spread") {
  const auto dir = make_temp_dir();
  write_file(dir / "scenario.json", scenario_body());
  const CliResult res = run_cli(
      "simulate --scenario scenario.json --replicates 1 --out-dir out", dir);
  REQUIRE(res.exit_code == 0);
  const json summary = json::parse(read_file(dir / "out" / "summary.json"));
  CHECK(summary.at("metrics").at("replicates_completed") == 1);
  CHECK(summary.at("metrics").at("l2_sd") == 0.0);
  CHECK(summary.at("metrics").at("fdr_sd") == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli simulate rejects malformed scenarios with a field path") {
  const auto dir = make_temp_dir();
  write_file(dir / "bad.json", R"({"n": 12, "p": 12, "s": 2,
    "design": {"kind": "iid_gaussian"},
    "signal": {"kind": "const", "amp": 1.0},
    "placement": "begin",
    "noise": {"kind": "gaussian", "sd": 1.0}})");
  const CliResult res = run_cli("simulate --scenario bad.json", dir);
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("design") != std::string::npos);
  CHECK(res.err.find("tau") != std::string::npos);

  write_file(dir / "unknown.json", scenario_body().insert(1, "\"bogus\": 1,"));
  const CliResult res2 = run_cli("simulate --scenario unknown.json", dir);
  CHECK(res2.exit_code == 2);
  CHECK(res2.err.find("bogus") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli compare agrees with simulate on the shared scenario") {
  const auto dir = make_temp_dir();
  write_file(dir / "scenario.json", scenario_body());
  const CliResult sim =
      run_cli("simulate --scenario scenario.json --out-dir out", dir);
  REQUIRE(sim.exit_code == 0);
  const CliResult cmp = run_cli(
      "compare --scenario scenario.json --engines laplace,qmf --out cmp.csv", dir);
  REQUIRE(cmp.exit_code == 0);

  const std::string body = read_file(dir / "cmp.csv");
  std::istringstream lines(body);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "method,order,metric,mean,sd");
  int rows = 0;
  double laplace_l2 = -1.0;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    if (line.rfind("laplace,prioritized,l2,", 0) == 0) {
      laplace_l2 = std::stod(line.substr(line.find("l2,") + 3));
    }
  }
  CHECK(rows == 8);  // 2 engines x 1 order x 4 metrics

  const json summary = json::parse(read_file(dir / "out" / "summary.json"));
  CHECK(laplace_l2 ==
        doctest::Approx(summary.at("metrics").at("l2_mean").get<double>())
            .epsilon(1e-15));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli diagnose reports design health for the identity") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", "1,0,0\n0,1,0\n0,0,1\n");
  const CliResult res = run_cli("diagnose --x x.csv --s-max 2", dir);
  REQUIRE(res.exit_code == 0);
  const json out = json::parse(res.out);
  CHECK(out.at("schema_version") == 1);
  CHECK(out.at("mc") == 0.0);
  CHECK(out.at("x_norm") == 1.0);
  CHECK(out.at("phi_tilde") == json::array({1.0, 1.0}));
  CHECK(out.at("lemma_d1_verified") == true);
  CHECK(out.at("flags").empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli rejects unknown engines and orders at parse time") {
  const auto dir = make_temp_dir();
  write_file(dir / "x.csv", kIdentityX);
  write_file(dir / "y.csv", kIdentityY);
  CHECK(run_cli("fit --x x.csv --y y.csv --engine bogus", dir).exit_code == 2);
  CHECK(run_cli("fit --x x.csv --y y.csv --order sideways", dir).exit_code == 2);
  std::filesystem::remove_all(dir);
}
