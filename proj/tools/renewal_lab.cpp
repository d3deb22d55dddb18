#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "renewal/config.hpp"
#include "renewal/error.hpp"
#include "renewal/parallel.hpp"
#include "renewal/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Renewal theory experiment runner"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir = "out";
  bool strict = false;
  int threads = renewal::default_threads();
  bool verbose = false;

  app.add_option("subcommand", subcommand, "solve | phi | stone | bt | couple | compensator | krt | rootzen | all")
      ->required()
      ->check(CLI::IsMember(renewal::subcommands()));
  app.add_option("--config", config_path, "JSON experiment config (optional for 'all')");
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--strict", strict, "exit 1 when any check fails");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "print measurements");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const auto seed = renewal::seed_from_environment();
    renewal::ExperimentConfig config;
    if (!config_path.empty()) {
      config = renewal::load_config(config_path, seed);
    } else if (subcommand == "all") {
      config = renewal::parse_config({{"distribution", {{"kind", "exponential"}, {"rate", 1.0}}},
                                      {"seed", seed.value_or(renewal::CheckOptions{}.seed)}});
    } else {
      throw renewal::Error(renewal::ErrorCode::config, "--config: required for '" + subcommand + "'");
    }
    renewal::RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads;
    const renewal::RunOutcome out = renewal::run_subcommand(subcommand, config, options);
    for (const auto& c : out.checks) std::cout << renewal::format_check(c, verbose) << '\n';
    std::cout << "report: " << out_dir << "/report.json\n";
    return strict && !out.all_passed ? 1 : 0;
  } catch (const renewal::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == renewal::ErrorCode::config ? 2 : 1;
  }
}
