#include "scenario_json.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "sparsevb/errors.hpp"

namespace sparsevb::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInputError("scenario: " + path + ": " + what);
}

void check_known_fields(const json& obj, const std::string& path,
                        const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) fail(path.empty() ? key : path + "." + key, "expected a number");
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_number_integer()) {
    fail(path.empty() ? key : path + "." + key, "expected an integer");
  }
  return v.get<long>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_boolean()) fail(path.empty() ? key : path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) fail(path.empty() ? key : path + "." + key, "expected a string");
  return v.get<std::string>();
}

DesignSpec parse_design(const json& j) {
  if (!j.is_object()) fail("design", "expected an object");
  DesignSpec design;
  const std::string kind = get_string(j, "design", "kind");
  if (kind == "identity") {
    check_known_fields(j, "design", {"kind"});
    design.kind = DesignSpec::Kind::Identity;
  } else if (kind == "iid_gaussian") {
    check_known_fields(j, "design", {"kind", "tau"});
    design.kind = DesignSpec::Kind::IidGaussian;
    design.tau = get_number(j, "design", "tau");
  } else if (kind == "equicorrelated") {
    check_known_fields(j, "design", {"kind", "rho"});
    design.kind = DesignSpec::Kind::Equicorrelated;
    design.rho = get_number(j, "design", "rho");
  } else {
    fail("design.kind", "expected identity, iid_gaussian, or equicorrelated");
  }
  return design;
}

SignalSpec parse_signal(const json& j) {
  if (!j.is_object()) fail("signal", "expected an object");
  SignalSpec signal;
  const std::string kind = get_string(j, "signal", "kind");
  if (kind == "const") {
    check_known_fields(j, "signal", {"kind", "amp"});
    signal.kind = SignalSpec::Kind::Const;
    signal.amp = get_number(j, "signal", "amp");
  } else if (kind == "uniform") {
    check_known_fields(j, "signal", {"kind", "lo", "hi"});
    signal.kind = SignalSpec::Kind::Uniform;
    signal.lo = get_number(j, "signal", "lo");
    signal.hi = get_number(j, "signal", "hi");
  } else {
    fail("signal.kind", "expected const or uniform");
  }
  return signal;
}

Placement parse_placement(const std::string& s) {
  if (s == "begin") return Placement::Begin;
  if (s == "middle") return Placement::Middle;
  if (s == "end") return Placement::End;
  if (s == "random") return Placement::Random;
  fail("placement", "expected begin, middle, end, or random");
}

NoiseSpec parse_noise(const json& j) {
  if (!j.is_object()) fail("noise", "expected an object");
  NoiseSpec noise;
  const std::string kind = get_string(j, "noise", "kind");
  if (kind == "gaussian") {
    check_known_fields(j, "noise", {"kind", "sd"});
    noise.kind = NoiseSpec::Kind::Gaussian;
    noise.param = get_number(j, "noise", "sd");
  } else if (kind == "laplace") {
    check_known_fields(j, "noise", {"kind", "scale"});
    noise.kind = NoiseSpec::Kind::Laplace;
    noise.param = get_number(j, "noise", "scale");
  } else if (kind == "uniform") {
    check_known_fields(j, "noise", {"kind", "half_width"});
    noise.kind = NoiseSpec::Kind::Uniform;
    noise.param = get_number(j, "noise", "half_width");
  } else if (kind == "student_t3") {
    check_known_fields(j, "noise", {"kind"});
    noise.kind = NoiseSpec::Kind::StudentT3;
    noise.param = 0.0;
  } else {
    fail("noise.kind", "expected gaussian, laplace, uniform, or student_t3");
  }
  return noise;
}

}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("cannot open scenario file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInputError("scenario: JSON parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw InvalidInputError("scenario: top level must be a JSON object");
  }

  check_known_fields(j, "",
                     {"n", "p", "s", "design", "signal", "placement", "noise",
                      "known_variance", "replicates", "seed", "lambda"});

  ScenarioSpec spec;
  spec.n = get_integer(j, "", "n");
  spec.p = get_integer(j, "", "p");
  spec.s = get_integer(j, "", "s");
  spec.design = parse_design(require(j, "", "design"));
  spec.signal = parse_signal(require(j, "", "signal"));
  spec.placement = parse_placement(get_string(j, "", "placement"));
  spec.noise = parse_noise(require(j, "", "noise"));
  spec.known_variance = get_bool(j, "", "known_variance");
  const long replicates = get_integer(j, "", "replicates");
  if (replicates < 1) fail("replicates", "must be positive");
  spec.replicates = static_cast<int>(replicates);
  const long seed = get_integer(j, "", "seed");
  if (seed < 0) fail("seed", "must be non-negative");
  spec.seed = static_cast<std::uint64_t>(seed);
  if (j.count("lambda")) {
    spec.lambda = get_number(j, "", "lambda");
  }

  validate_scenario(spec);
  return spec;
}

}  // namespace sparsevb::cli
