#include "renewal/config.hpp"

#include <cstdlib>
#include <fstream>

#include "renewal/error.hpp"

namespace renewal {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::config, path + ": " + what);
}

double number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  if (!j[key].is_number()) fail(path + "." + key, "must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return j.contains(key) ? number(j, key, path) : fallback;
}

std::vector<double> numbers_or(const json& j, const std::string& key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    if (!j[key][i].is_number()) fail(key + "[" + std::to_string(i) + "]", "must be a number");
    out.push_back(j[key][i].get<double>());
  }
  return out;
}

int positive_int_or(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 1) fail(key, "must be a positive integer");
  return j[key].get<int>();
}

}  // namespace

DistributionSpec distribution_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(path + ".kind", "missing or not a string");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "exponential") return DistributionSpec::exponential(number(j, "rate", path));
    if (kind == "gamma") return DistributionSpec::gamma(number(j, "shape", path), number(j, "rate", path));
    if (kind == "uniform") return DistributionSpec::uniform(number(j, "lo", path), number(j, "hi", path));
    if (kind == "shifted-pareto")
      return DistributionSpec::shifted_pareto(number(j, "tail_index", path), number(j, "scale", path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown kind '" + kind + "'");
}

json to_json(const DistributionSpec& d) {
  json j;
  j["kind"] = kind_name(d.kind());
  switch (d.kind()) {
    case Kind::exponential: j["rate"] = d.p1(); break;
    case Kind::gamma: j["shape"] = d.p1(); j["rate"] = d.p2(); break;
    case Kind::uniform: j["lo"] = d.p1(); j["hi"] = d.p2(); break;
    case Kind::shifted_pareto: j["tail_index"] = d.p1(); j["scale"] = d.p2(); break;
  }
  return j;
}

ExperimentConfig parse_config(const json& j, std::optional<std::uint64_t> seed_override) {
  if (!j.is_object()) fail("$", "config must be a JSON object");
  ExperimentConfig c;
  if (!j.contains("distribution")) fail("distribution", "missing");
  c.distribution = distribution_from_json(j["distribution"]);
  const double mean = c.distribution.mean();

  const json grid = j.contains("grid") ? j["grid"] : json::object();
  if (!grid.is_object()) fail("grid", "must be an object");
  c.h = number_or(grid, "h", "grid", mean / 200.0);
  c.horizon = number_or(grid, "horizon", "grid", 100.0 * mean);
  if (!(c.h > 0.0)) fail("grid.h", "must be > 0");
  if (!(c.horizon >= c.h)) fail("grid.horizon", "must be >= grid.h");

  if (!j.contains("seed")) fail("seed", "missing (seed is mandatory)");
  if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
    fail("seed", "must be a non-negative integer");
  c.seed = j["seed"].get<std::uint64_t>();
  if (seed_override) c.seed = *seed_override;

  c.t = number_or(j, "t", "$", 10.0 * mean);
  c.ts = numbers_or(j, "ts", {5.0 * mean, 10.0 * mean, 20.0 * mean});
  c.xs = numbers_or(j, "xs", {});
  if (c.xs.empty())
    for (int i = 0; i <= 24; ++i) c.xs.push_back((20.0 + 2.5 * i) * mean);
  c.z_exponents = numbers_or(j, "z_exponents", {2.0, 4.0});
  c.T_list = numbers_or(j, "T_list", {100.0, 1000.0});
  c.n_paths = positive_int_or(j, "n_paths", 1000);
  c.n_traces = positive_int_or(j, "n_traces", 1000);
  c.p = number_or(j, "p", "$", 0.5);
  c.p_recurrence = number_or(j, "p_recurrence", "$", 3.0);
  c.q = number_or(j, "q", "$", 2.0);
  c.epsilon = number_or(j, "epsilon", "$", 0.1);
  if (j.contains("statistic")) {
    if (!j["statistic"].is_string()) fail("statistic", "must be a string");
    c.statistic = j["statistic"].get<std::string>();
    if (c.statistic != "max-xi" && c.statistic != "max-tau") fail("statistic", "must be max-xi or max-tau");
  }
  for (double r : c.z_exponents)
    if (!(r > 1.0)) fail("z_exponents", "each exponent must be > 1");
  for (double T : c.T_list)
    if (!(T > 0.0)) fail("T_list", "each T must be > 0");
  if (!(c.p > 0.0)) fail("p", "must be > 0");
  if (!(c.p_recurrence > 0.0)) fail("p_recurrence", "must be > 0");
  if (!(c.q > 0.0)) fail("q", "must be > 0");
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream is(path);
  if (!is) fail(path, "cannot open config file");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, seed_override);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["distribution"] = to_json(c.distribution);
  j["grid"] = {{"h", c.h}, {"horizon", c.horizon}};
  j["seed"] = c.seed;
  j["t"] = c.t;
  j["ts"] = c.ts;
  j["xs"] = c.xs;
  j["z_exponents"] = c.z_exponents;
  j["T_list"] = c.T_list;
  j["n_paths"] = c.n_paths;
  j["n_traces"] = c.n_traces;
  j["p"] = c.p;
  j["p_recurrence"] = c.p_recurrence;
  j["q"] = c.q;
  j["epsilon"] = c.epsilon;
  j["statistic"] = c.statistic;
  return j;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* v = std::getenv("RENEWAL_LAB_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long s = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') throw Error(ErrorCode::config, "RENEWAL_LAB_SEED: not an unsigned integer");
  return static_cast<std::uint64_t>(s);
}

}  // namespace renewal
