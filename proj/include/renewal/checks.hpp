#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace renewal {

struct Measurement {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "<", ">", "info"
  double bound = 0.0;
  bool ok = true;
};

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = true;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
  double seconds = 0.0;

  void expect(const std::string& what, double value, const std::string& relation, double bound);
  void info(const std::string& what, double value);
  void require(const std::string& what, bool ok);
};

struct CheckOptions {
  std::uint64_t seed = 20240611;
  int threads = 1;
};

constexpr int kCriterionCount = 12;

std::string check_name(int id);
CheckResult run_check(int id, const CheckOptions& options);
std::vector<CheckResult> run_all_checks(const CheckOptions& options);

// One line: "[PASS] criterion 3 recurrence-law-vs-monte-carlo (12.3 s)" followed by measurements when verbose.
std::string format_check(const CheckResult& r, bool verbose);

}  // namespace renewal
