#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "renewal/config.hpp"
#include "renewal/error.hpp"
#include "renewal/runner.hpp"

using namespace renewal;
using nlohmann::json;

namespace {

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults scale with the mean") {
  const ExperimentConfig c = parse_config(json{{"distribution", {{"kind", "gamma"}, {"shape", 2.0}, {"rate", 1.0}}}, {"seed", 7}});
  CHECK(c.h == doctest::Approx(0.01));
  CHECK(c.horizon == doctest::Approx(200.0));
  CHECK(c.seed == 7);
  CHECK(c.xs.size() == 25);
  CHECK(c.xs.front() == doctest::Approx(40.0));
  CHECK(c.xs.back() == doctest::Approx(160.0));
}

TEST_CASE("validation errors name the field") {
  CHECK(config_error(json{{"seed", 1}}).find("distribution") != std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "exponential"}, {"rate", 1.0}}}}).find("seed") != std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "exponential"}, {"rate", "x"}}}, {"seed", 1}}).find("distribution.rate") !=
        std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "weibull"}}}, {"seed", 1}}).find("distribution.kind") != std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "exponential"}, {"rate", 1.0}}}, {"seed", 1}, {"grid", {{"h", -1.0}}}})
            .find("grid.h") != std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "exponential"}, {"rate", 1.0}}}, {"seed", 1}, {"ts", {1.0, "a"}}})
            .find("ts[1]") != std::string::npos);
  CHECK(config_error(json{{"distribution", {{"kind", "uniform"}, {"lo", 2.0}, {"hi", 1.0}}}, {"seed", 1}})
            .find("distribution") != std::string::npos);
}

TEST_CASE("seed override") {
  const json j{{"distribution", {{"kind", "exponential"}, {"rate", 1.0}}}, {"seed", 1}};
  CHECK(parse_config(j, 42).seed == 42);
}

TEST_CASE("config echo round-trips") {
  const json j{{"distribution", {{"kind", "shifted-pareto"}, {"tail_index", 3.5}, {"scale", 2.5}}},
               {"seed", 3},
               {"grid", {{"h", 0.02}, {"horizon", 50.0}}},
               {"ts", {1.0, 2.0}},
               {"statistic", "max-tau"}};
  const ExperimentConfig a = parse_config(j);
  const ExperimentConfig b = parse_config(to_json(a));
  CHECK(to_json(a) == to_json(b));
  CHECK(b.distribution.kind() == Kind::shifted_pareto);
  CHECK(b.statistic == "max-tau");
}

TEST_CASE("runner writes a report and deterministic artifacts") {
  const auto root = std::filesystem::temp_directory_path() / "renewal_lab_runner_test";
  std::filesystem::remove_all(root);
  const json j{{"distribution", {{"kind", "gamma"}, {"shape", 2.0}, {"rate", 1.0}}},
               {"seed", 11},
               {"grid", {{"h", 0.02}, {"horizon", 40.0}}},
               {"n_traces", 300},
               {"n_paths", 300},
               {"ts", {5.0, 10.0}},
               {"T_list", {20.0, 50.0}}};
  const ExperimentConfig c = parse_config(j);
  for (const char* run : {"a", "b"}) {
    RunOptions o;
    o.out_dir = (root / run).string();
    o.threads = run[0] == 'a' ? 1 : 3;
    const RunOutcome solve = run_subcommand("solve", c, o);
    CHECK(solve.all_passed);
    run_subcommand("couple", c, o);
    run_subcommand("compensator", c, o);
  }
  for (const char* f : {"Z.csv", "traces.csv", "trace_summary.csv", "sup_sweep.csv", "martingale.csv"}) {
    CAPTURE(f);
    const std::string a = slurp(root / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(root / "b" / f));
  }
  const json report = json::parse(slurp(root / "a" / "report.json"));
  CHECK(report["subcommand"] == "compensator");
  CHECK(parse_config(report["config"]).seed == 11);
  CHECK(report.contains("wall_time_s"));
  CHECK_THROWS_AS(run_subcommand("nope", c, RunOptions{}), Error);
  std::filesystem::remove_all(root);
}
