#pragma once

#include <vector>

#include "renewal/distributions.hpp"
#include "renewal/rng.hpp"

namespace renewal {

enum class DelayMode { zero, stationary, fixed };

struct DelaySpec {
  DelayMode mode = DelayMode::zero;
  double t0 = 0.0;  // used when mode == fixed
};

// Zero-delayed paths have S_0 = 0 implicit and events = S_1, S_2, ...
// Delayed paths have events = tau_0, tau_0 + tau_1, ...
// The last event is beyond the horizon.
struct RenewalPath {
  double delay = 0.0;
  bool zero_delayed = true;
  std::vector<double> events;
  double horizon = 0.0;

  // N(t), counting S_0 = 0 for zero-delayed paths.
  std::size_t count(double t) const;
};

RenewalPath simulate_path(const DistributionSpec& F, double horizon, const DelaySpec& delay, Rng& rng);

struct Recurrence {
  double A = 0.0;
  double B = 0.0;
};

Recurrence recurrence_times(const RenewalPath& path, double t);

// Lambda(t) = sum of H(tau_i) over completed cycles + H(A_t). Zero-delayed paths.
double compensator_at(const RenewalPath& path, const DistributionSpec& F, double t);

struct CycleHazards {
  std::vector<double> xi;
};

CycleHazards cycle_hazards(const RenewalPath& path, const DistributionSpec& F);

double scaled_compensator_sup(const RenewalPath& path, const DistributionSpec& F, double T, double p);

struct RecurrenceSup {
  double supA = 0.0;
  double supB = 0.0;
};

RecurrenceSup scaled_recurrence_sup(const RenewalPath& path, double T, double p);

// max over interarrival spans touching [0, T] (delay included), scaled by T^(1/p).
double recurrence_domination_bound(const RenewalPath& path, double T, double p);
// max over cycles touching [0, T] of the full cycle hazard xi, scaled by T^p.
double compensator_domination_bound(const RenewalPath& path, const DistributionSpec& F, double T, double p);

enum class MaxStatistic { max_xi, max_tau };

// Per-path maximum of the running-cycle statistic over [0, T] for a zero-delayed path.
double path_maximum(const RenewalPath& path, const DistributionSpec& F, double T, MaxStatistic stat);

double rootzen_limit_cdf(const DistributionSpec& F, double T, MaxStatistic stat, double x);

double rootzen_uniform_error(const DistributionSpec& F, double T, int n_paths, MaxStatistic stat,
                             std::uint64_t seed, int threads = 1);

}  // namespace renewal
