#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "renewal/distributions.hpp"
#include "renewal/grid.hpp"

namespace renewal {

struct ExperimentConfig {
  DistributionSpec distribution = DistributionSpec::exponential(1.0);
  double h = 0.0;
  double horizon = 0.0;
  std::uint64_t seed = 0;

  double t = 0.0;                 // bt: single time, used when ts is empty
  std::vector<double> ts;         // bt, couple, compensator, tv lattices
  std::vector<double> xs;         // krt evaluation points
  std::vector<double> z_exponents;
  std::vector<double> T_list;
  int n_paths = 1000;
  int n_traces = 1000;
  double p = 0.5;
  double p_recurrence = 3.0;
  double q = 2.0;
  double epsilon = 0.1;
  std::string statistic = "max-xi";

  Grid grid() const { return Grid::with_horizon(h, horizon); }
};

// Field errors are reported as Error(config) with the JSON path in the message.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const DistributionSpec& d);
DistributionSpec distribution_from_json(const nlohmann::json& j, const std::string& path = "distribution");

// RENEWAL_LAB_SEED, when set and numeric.
std::optional<std::uint64_t> seed_from_environment();

}  // namespace renewal
