#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "renewal/compensator.hpp"
#include "renewal/error.hpp"
#include "renewal/stats.hpp"

using namespace renewal;

namespace {

RenewalPath hand_path(std::vector<double> events, double horizon) {
  RenewalPath p;
  p.events = std::move(events);
  p.horizon = horizon;
  return p;
}

std::vector<DistributionSpec> all_kinds() {
  return {DistributionSpec::exponential(1.0), DistributionSpec::gamma(2.0, 1.0), DistributionSpec::uniform(1.0, 2.0),
          DistributionSpec::shifted_pareto(3.5, 2.5)};
}

// Dense-v evaluation of the running-cycle hazard sup.
double dense_compensator_sup(const RenewalPath& path, const DistributionSpec& F, double T, double p) {
  double best = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double t = T * i / 20000.0;
    best = std::max(best, F.cumulative_hazard(recurrence_times(path, t).A));
  }
  return best / std::pow(T, p);
}

}  // namespace

TEST_CASE("recurrence times on a hand path") {
  const RenewalPath p = hand_path({2.0, 5.0, 9.0}, 6.0);
  const Recurrence r = recurrence_times(p, 3.0);
  CHECK(r.A == doctest::Approx(1.0));
  CHECK(r.B == doctest::Approx(2.0));
  CHECK(recurrence_times(p, 5.0).A == 0.0);
  CHECK(recurrence_times(p, 5.0).B == doctest::Approx(4.0));
  CHECK(p.count(0.0) == 1);
  CHECK(p.count(5.0) == 3);
}

TEST_CASE("path structure") {
  Rng rng(1);
  for (const auto& F : all_kinds())
    for (auto mode : {DelayMode::zero, DelayMode::stationary, DelayMode::fixed}) {
      const RenewalPath p = simulate_path(F, 30.0, DelaySpec{mode, 0.7}, rng);
      CHECK(p.events.back() > 30.0);
      CHECK(p.events.front() > 0.0);
      for (std::size_t i = 1; i < p.events.size(); ++i) CHECK(p.events[i] > p.events[i - 1]);
      if (mode == DelayMode::fixed) CHECK(p.events.front() == 0.7);
    }
  CHECK_THROWS_AS(simulate_path(DistributionSpec::exponential(1.0), 0.0, DelaySpec{}, rng), Error);
}

TEST_CASE("poisson counts") {
  const auto F = DistributionSpec::exponential(2.0);
  const double horizon = 5.0;
  std::vector<double> n(10000);
  for (std::size_t i = 0; i < n.size(); ++i) {
    Rng rng = Rng::derived(2, i);
    n[i] = static_cast<double>(simulate_path(F, horizon, DelaySpec{}, rng).count(horizon));
  }
  const MeanEstimate e = mean_sd(n);
  CHECK(std::fabs(e.mean - (1.0 + 2.0 * horizon)) < 3.5 * e.std_error());
}

TEST_CASE("stationary delay gives stationary increments and B_t") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  const std::size_t n = 10000;
  std::vector<double> inc0(n), inc1(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::derived(3, i);
    const RenewalPath p = simulate_path(F, 12.0, DelaySpec{DelayMode::stationary, 0.0}, rng);
    inc0[i] = static_cast<double>(p.count(3.0)) - static_cast<double>(p.count(0.0));
    inc1[i] = static_cast<double>(p.count(10.0)) - static_cast<double>(p.count(7.0));
    b[i] = recurrence_times(p, 7.3).B;
  }
  const MeanEstimate a = mean_sd(inc0), c = mean_sd(inc1);
  CHECK(std::fabs(a.mean - c.mean) < 3.5 * std::hypot(a.std_error(), c.std_error()));
  CHECK(a.mean == doctest::Approx(3.0 * F.rate_m()).epsilon(0.05));
  CHECK(ks_statistic(b, [&](double x) { return F.stationary_delay_cdf(x); }) < ks_critical(n, 0.001));
}

TEST_CASE("exponential forward recurrence is exponential") {
  const auto F = DistributionSpec::exponential(1.5);
  std::vector<double> b(10000);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Rng rng = Rng::derived(4, i);
    b[i] = recurrence_times(simulate_path(F, 7.0, DelaySpec{}, rng), 10.0 / 1.5 * 0.5).B;
  }
  CHECK(ks_statistic(b, [&](double x) { return F.cdf(x); }) < ks_critical(10000.0, 0.001));
}

TEST_CASE("compensator basics") {
  const auto E = DistributionSpec::exponential(1.7);
  Rng rng(5);
  const RenewalPath p = simulate_path(E, 20.0, DelaySpec{}, rng);
  CHECK(compensator_at(p, E, 0.0) == 0.0);
  for (double t : {0.3, 4.0, 19.0}) CHECK(compensator_at(p, E, t) == doctest::Approx(1.7 * t).epsilon(1e-12));
  const CycleHazards c = cycle_hazards(p, E);
  double prev = 0.0;
  for (std::size_t i = 0; i < c.xi.size(); ++i) {
    CHECK(c.xi[i] == doctest::Approx(1.7 * (p.events[i] - prev)).epsilon(1e-10));
    prev = p.events[i];
  }
}

TEST_CASE("compensator telescopes and is monotone") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  Rng rng(6);
  const RenewalPath p = simulate_path(F, 40.0, DelaySpec{}, rng);
  const CycleHazards c = cycle_hazards(p, F);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.xi.size() && p.events[i] <= 40.0; ++i) {
    sum += c.xi[i];
    CHECK(c.xi[i] > 0.0);
    CHECK(compensator_at(p, F, p.events[i]) == doctest::Approx(sum).epsilon(1e-10));
  }
  double prev = 0.0;
  for (double t = 0.0; t <= 40.0; t += 0.05) {
    const double v = compensator_at(p, F, t);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("martingale centering and xi law") {
  for (const auto& F : all_kinds()) {
    CAPTURE(F.describe());
    const std::size_t n = 4000;
    std::vector<double> m(n), xi;
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = Rng::derived(7, i);
      const RenewalPath p = simulate_path(F, 10.0 * F.mean(), DelaySpec{}, rng);
      m[i] = static_cast<double>(p.count(10.0 * F.mean())) - 1.0 - compensator_at(p, F, 10.0 * F.mean());
      xi.push_back(F.cumulative_hazard(p.events.front()));
    }
    const MeanEstimate e = mean_sd(m);
    CHECK(std::fabs(e.mean) < 3.5 * e.std_error());
    const MeanEstimate ex = mean_sd(xi);
    CHECK(std::fabs(ex.mean - 1.0) < 3.5 * ex.std_error());
    CHECK(ks_statistic(xi, [](double x) { return -std::expm1(-x); }) < ks_critical(n, 0.001));
  }
}

TEST_CASE("compensator sup matches dense evaluation and is dominated") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = Rng::derived(8, i);
    const double T = 30.0;
    const RenewalPath p = simulate_path(F, T, DelaySpec{}, rng);
    const double exact = scaled_compensator_sup(p, F, T, 0.5);
    const double dense = dense_compensator_sup(p, F, T, 0.5);
    CHECK(exact >= dense - 1e-12);
    CHECK(exact == doctest::Approx(dense).epsilon(1e-3));
    CHECK(exact <= compensator_domination_bound(p, F, T, 0.5) * (1.0 + 1e-12));
  }
}

TEST_CASE("exponential compensator sup is the longest elapsed span") {
  const auto E = DistributionSpec::exponential(1.0);
  Rng rng(9);
  const RenewalPath p = simulate_path(E, 50.0, DelaySpec{}, rng);
  double best = 0.0, prev = 0.0;
  for (double e : p.events) {
    if (e > 50.0) break;
    best = std::max(best, e - prev);
    prev = e;
  }
  best = std::max(best, 50.0 - prev);
  CHECK(scaled_compensator_sup(p, E, 50.0, 1.0) == doctest::Approx(best / 50.0));
}

TEST_CASE("recurrence sup domination and exponential median") {
  const auto P = DistributionSpec::shifted_pareto(3.5, 2.5);
  for (std::size_t i = 0; i < 200; ++i) {
    Rng rng = Rng::derived(10, i);
    for (auto mode : {DelayMode::zero, DelayMode::stationary}) {
      const RenewalPath p = simulate_path(P, 100.0, DelaySpec{mode, 0.0}, rng);
      const RecurrenceSup s = scaled_recurrence_sup(p, 100.0, 3.0);
      const double bound = recurrence_domination_bound(p, 100.0, 3.0);
      CHECK(s.supA <= bound * (1.0 + 1e-12));
      CHECK(s.supB <= bound * (1.0 + 1e-12));
    }
  }
  const auto E = DistributionSpec::exponential(1.0);
  std::vector<double> b(201);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Rng rng = Rng::derived(11, i);
    b[i] = scaled_recurrence_sup(simulate_path(E, 1e4, DelaySpec{}, rng), 1e4, 1.0).supB;
  }
  std::nth_element(b.begin(), b.begin() + 100, b.end());
  CHECK(b[100] < 0.01);
}

TEST_CASE("cycle-maximum limit law") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  CHECK(rootzen_limit_cdf(F, 100.0, MaxStatistic::max_xi, 0.5 * 100.0) == doctest::Approx(1.0).epsilon(1e-6));
  const double x = 4.0;
  CHECK(rootzen_limit_cdf(F, 100.0, MaxStatistic::max_xi, x) ==
        doctest::Approx(std::pow(1.0 - std::exp(-x), 50.0)).epsilon(1e-12));
  CHECK(rootzen_limit_cdf(F, 100.0, MaxStatistic::max_tau, x) == doctest::Approx(std::pow(F.cdf(x), 50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(rootzen_limit_cdf(DistributionSpec::uniform(0.0, 1.0), 10.0, MaxStatistic::max_tau, 0.5), Error);
  CHECK_THROWS_AS(rootzen_uniform_error(DistributionSpec::uniform(0.0, 1.0), 10.0, 10, MaxStatistic::max_tau, 1), Error);
  const double e1 = rootzen_uniform_error(F, 20.0, 2000, MaxStatistic::max_xi, 12, 1);
  const double e2 = rootzen_uniform_error(F, 20.0, 2000, MaxStatistic::max_xi, 12, 3);
  CHECK(e1 == e2);
  CHECK(e1 > 0.0);
  CHECK(e1 < 1.0);
}

TEST_CASE("operations needing a zero-delayed path reject delayed ones") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  Rng rng(13);
  const RenewalPath p = simulate_path(F, 10.0, DelaySpec{DelayMode::stationary, 0.0}, rng);
  CHECK_THROWS_AS(compensator_at(p, F, 5.0), Error);
  CHECK_THROWS_AS(cycle_hazards(p, F), Error);
}
