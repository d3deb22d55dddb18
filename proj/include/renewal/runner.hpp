#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "renewal/checks.hpp"
#include "renewal/config.hpp"

namespace renewal {

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
};

struct RunOutcome {
  nlohmann::json report;
  std::vector<CheckResult> checks;
  bool all_passed = true;
};

const std::vector<std::string>& subcommands();

// Runs one subcommand, writes its CSV artifacts and report.json into out_dir.
RunOutcome run_subcommand(const std::string& name, const ExperimentConfig& config, const RunOptions& options);

nlohmann::json to_json(const CheckResult& r);

}  // namespace renewal
