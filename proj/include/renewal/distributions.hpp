#pragma once

#include <string>

#include "renewal/rng.hpp"

namespace renewal {

enum class Kind { exponential, gamma, uniform, shifted_pareto };

std::string kind_name(Kind kind);

struct MomentReport {
  double order = 1.0;
  double value = 0.0;
  bool infinite = false;
};

// Interarrival law. Parameters are validated at construction.
//   exponential: p1 = rate
//   gamma:       p1 = shape (>= 1), p2 = rate
//   uniform:     p1 = lo, p2 = hi
//   shifted-pareto: p1 = tail index r (> 1), p2 = scale c; density r c^r (c+x)^(-r-1)
class DistributionSpec {
 public:
  static DistributionSpec exponential(double rate);
  static DistributionSpec gamma(double shape, double rate);
  static DistributionSpec uniform(double lo, double hi);
  static DistributionSpec shifted_pareto(double tail_index, double scale);

  Kind kind() const { return kind_; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  std::string describe() const;

  double pdf(double x) const;
  // Density used for grid sampling: the midpoint of one-sided limits at jumps.
  double grid_density(double x) const;
  double cdf(double x) const;
  double survival(double x) const;
  double hazard(double x) const;
  double cumulative_hazard(double x) const;
  double quantile(double u) const;
  double sample(Rng& rng) const { return quantile(rng.uniform()); }

  double mean() const { return mean_; }
  // m = 1 / mean
  double rate_m() const { return 1.0 / mean_; }
  MomentReport moment(double s) const;
  // Right end of the support (infinity when unbounded).
  double support_end() const;

  // I(x) = int_0^x survival, J(x) = int_x^inf survival.
  double integrated_survival(double x) const;
  double tail_integral(double x) const;

  double stationary_delay_density(double x) const;
  double stationary_delay_cdf(double x) const;
  double sample_stationary_delay(Rng& rng) const;

 private:
  DistributionSpec(Kind kind, double p1, double p2);

  Kind kind_;
  double p1_;
  double p2_;
  double mean_;
};

}  // namespace renewal
