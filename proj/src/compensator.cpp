#include "renewal/compensator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renewal/error.hpp"
#include "renewal/parallel.hpp"

namespace renewal {

std::size_t RenewalPath::count(double t) const {
  const auto n = static_cast<std::size_t>(std::upper_bound(events.begin(), events.end(), t) - events.begin());
  return n + (zero_delayed ? 1 : 0);
}

RenewalPath simulate_path(const DistributionSpec& F, double horizon, const DelaySpec& delay, Rng& rng) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::invalid_parameter, "horizon must be > 0");
  RenewalPath path;
  path.horizon = horizon;
  double pos = 0.0;
  switch (delay.mode) {
    case DelayMode::zero:
      path.zero_delayed = true;
      break;
    case DelayMode::stationary:
      path.zero_delayed = false;
      pos = F.sample_stationary_delay(rng);
      path.delay = pos;
      path.events.push_back(pos);
      break;
    case DelayMode::fixed:
      path.zero_delayed = false;
      pos = delay.t0;
      path.delay = pos;
      path.events.push_back(pos);
      break;
  }
  while (pos <= horizon) {
    pos += F.sample(rng);
    path.events.push_back(pos);
  }
  return path;
}

Recurrence recurrence_times(const RenewalPath& path, double t) {
  const auto it = std::upper_bound(path.events.begin(), path.events.end(), t);
  Recurrence r;
  r.B = it == path.events.end() ? std::numeric_limits<double>::infinity() : *it - t;
  if (it != path.events.begin()) r.A = t - *(it - 1);
  else r.A = t;
  return r;
}

namespace {

void require_zero_delayed(const RenewalPath& path) {
  if (!path.zero_delayed) throw Error(ErrorCode::invalid_parameter, "operation needs a zero-delayed path");
}

// Epochs S_0 = 0, S_1, ... with S_i <= T, plus the index of the first epoch beyond T.
template <class Fn>
void for_each_completed_cycle(const RenewalPath& path, double T, Fn&& fn) {
  double prev = 0.0;
  for (double e : path.events) {
    if (e > T) break;
    fn(e - prev);
    prev = e;
  }
}

double last_epoch(const RenewalPath& path, double T) {
  const auto it = std::upper_bound(path.events.begin(), path.events.end(), T);
  return it == path.events.begin() ? 0.0 : *(it - 1);
}

}  // namespace

double compensator_at(const RenewalPath& path, const DistributionSpec& F, double t) {
  require_zero_delayed(path);
  double lambda = 0.0;
  for_each_completed_cycle(path, t, [&](double tau) { lambda += F.cumulative_hazard(tau); });
  return lambda + F.cumulative_hazard(t - last_epoch(path, t));
}

CycleHazards cycle_hazards(const RenewalPath& path, const DistributionSpec& F) {
  require_zero_delayed(path);
  CycleHazards c;
  for_each_completed_cycle(path, path.horizon, [&](double tau) { c.xi.push_back(-std::log1p(-F.cdf(tau))); });
  return c;
}

double scaled_compensator_sup(const RenewalPath& path, const DistributionSpec& F, double T, double p) {
  require_zero_delayed(path);
  double best = 0.0;
  for_each_completed_cycle(path, T, [&](double tau) { best = std::max(best, F.cumulative_hazard(tau)); });
  best = std::max(best, F.cumulative_hazard(T - last_epoch(path, T)));
  return best / std::pow(T, p);
}

double compensator_domination_bound(const RenewalPath& path, const DistributionSpec& F, double T, double p) {
  require_zero_delayed(path);
  double best = 0.0;
  double prev = 0.0;
  for (double e : path.events) {
    best = std::max(best, -std::log1p(-F.cdf(e - prev)));
    if (e > T) break;
    prev = e;
  }
  return best / std::pow(T, p);
}

RecurrenceSup scaled_recurrence_sup(const RenewalPath& path, double T, double p) {
  RecurrenceSup s;
  const double scale = std::pow(T, 1.0 / p);
  double prev = path.zero_delayed ? 0.0 : -1.0;
  if (!path.zero_delayed) {
    s.supA = std::min(path.delay, T);
    s.supB = path.delay;
  }
  for (double e : path.events) {
    if (prev >= 0.0 && prev <= T) s.supB = std::max(s.supB, e - prev);
    if (e > T) break;
    if (prev >= 0.0) s.supA = std::max(s.supA, e - prev);
    prev = e;
  }
  s.supA = std::max(s.supA, recurrence_times(path, T).A);
  s.supA /= scale;
  s.supB /= scale;
  return s;
}

double recurrence_domination_bound(const RenewalPath& path, double T, double p) {
  double best = path.zero_delayed ? 0.0 : path.delay;
  double prev = path.zero_delayed ? 0.0 : -1.0;
  for (double e : path.events) {
    if (prev >= 0.0) best = std::max(best, e - prev);
    if (e > T) break;
    prev = e;
  }
  return best / std::pow(T, 1.0 / p);
}

double path_maximum(const RenewalPath& path, const DistributionSpec& F, double T, MaxStatistic stat) {
  require_zero_delayed(path);
  double best = 0.0;
  if (stat == MaxStatistic::max_xi) {
    for_each_completed_cycle(path, T, [&](double tau) { best = std::max(best, -std::log1p(-F.cdf(tau))); });
    best = std::max(best, F.cumulative_hazard(T - last_epoch(path, T)));
  } else {
    for_each_completed_cycle(path, T, [&](double tau) { best = std::max(best, tau); });
    best = std::max(best, T - last_epoch(path, T));
  }
  return best;
}

double rootzen_limit_cdf(const DistributionSpec& F, double T, MaxStatistic stat, double x) {
  if (stat == MaxStatistic::max_tau && F.kind() == Kind::uniform)
    throw Error(ErrorCode::finite_support, "cycle maximum of a uniform law has bounded support");
  if (x <= 0.0) return 0.0;
  const double G = stat == MaxStatistic::max_xi ? -std::expm1(-x) : F.cdf(x);
  return std::exp(F.rate_m() * T * std::log(G));
}

double rootzen_uniform_error(const DistributionSpec& F, double T, int n_paths, MaxStatistic stat,
                             std::uint64_t seed, int threads) {
  if (stat == MaxStatistic::max_tau && F.kind() == Kind::uniform)
    throw Error(ErrorCode::finite_support, "cycle maximum of a uniform law has bounded support");
  if (n_paths < 1) throw Error(ErrorCode::invalid_parameter, "n_paths must be >= 1");
  auto maxima = parallel_map(static_cast<std::size_t>(n_paths), threads, [&](std::size_t i) {
    Rng rng = Rng::derived(seed, i);
    const RenewalPath path = simulate_path(F, T, DelaySpec{}, rng);
    return path_maximum(path, F, T, stat);
  });
  std::sort(maxima.begin(), maxima.end());
  const double n = static_cast<double>(maxima.size());
  double err = 0.0;
  for (std::size_t i = 0; i < maxima.size(); ++i) {
    const double g = rootzen_limit_cdf(F, T, stat, maxima[i]);
    err = std::max(err, std::fabs(static_cast<double>(i + 1) / n - g));
    err = std::max(err, std::fabs(static_cast<double>(i) / n - g));
  }
  const double mT = F.rate_m() * T;
  for (int j = 1; j <= 1000; ++j) {
    const double q = static_cast<double>(j) / 1001.0;
    const double gq = std::pow(q, 1.0 / mT);
    const double x = stat == MaxStatistic::max_xi ? -std::log1p(-gq) : F.quantile(gq);
    const auto below = static_cast<double>(std::upper_bound(maxima.begin(), maxima.end(), x) - maxima.begin());
    err = std::max(err, std::fabs(below / n - rootzen_limit_cdf(F, T, stat, x)));
  }
  return err;
}

}  // namespace renewal
