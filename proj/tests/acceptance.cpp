#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "renewal/checks.hpp"
#include "renewal/config.hpp"
#include "renewal/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int criterion = 0;
  int threads = renewal::default_threads();
  bool quiet = false;
  app.add_option("--criterion", criterion, "run one criterion (1-12); all when omitted")
      ->check(CLI::Range(1, renewal::kCriterionCount));
  app.add_option("--threads", threads)->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", quiet, "omit measurements");
  CLI11_PARSE(app, argc, argv);

  renewal::CheckOptions options;
  options.threads = threads;
  if (auto seed = renewal::seed_from_environment()) options.seed = *seed;

  bool ok = true;
  const int first = criterion > 0 ? criterion : 1;
  const int last = criterion > 0 ? criterion : renewal::kCriterionCount;
  for (int id = first; id <= last; ++id) {
    const renewal::CheckResult r = renewal::run_check(id, options);
    std::cout << renewal::format_check(r, !quiet) << std::endl;
    ok = ok && r.passed;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
