#include <cmath>
#include <vector>

#include "doctest.h"
#include "renewal/asymptotics.hpp"
#include "renewal/error.hpp"

using namespace renewal;

namespace {

DecayCurve curve(const std::vector<double>& xs, double (*f)(double)) {
  DecayCurve c;
  for (double x : xs) c.points.push_back({x, f(x)});
  return c;
}

}  // namespace

TEST_CASE("slope of an exact power law") {
  const auto xs = logspace(1.0, 100.0, 20);
  const SlopeFit f = fit_slope(curve(xs, [](double x) { return std::pow(x, -2.0); }), 1.0, 100.0, 0.0);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.used == 20);
}

TEST_CASE("slope of a perturbed power law") {
  const auto xs = linspace(20.0, 80.0, 25);
  const SlopeFit f = fit_slope(curve(xs, [](double x) { return 3.0 * std::pow(x, -1.5) * (1.0 + 0.01 * std::sin(x)); }),
                               20.0, 80.0, 0.0);
  CHECK(f.slope > -1.6);
  CHECK(f.slope < -1.4);
}

TEST_CASE("points below the floor are excluded") {
  const auto xs = linspace(1.0, 10.0, 10);
  const DecayCurve c = curve(xs, [](double x) { return std::pow(x, -3.0); });
  const SlopeFit f = fit_slope(c, 1.0, 10.0, 2e-3);
  CHECK(f.below_floor == 3);
  CHECK(f.used == 7);
  CHECK_THROWS_AS(fit_slope(c, 1.0, 10.0, 10.0), Error);
}

TEST_CASE("lattices") {
  const auto l = linspace(2.0, 4.0, 5);
  CHECK(l.size() == 5);
  CHECK(l[1] == doctest::Approx(2.5));
  const auto g = logspace(1.0, 1000.0, 4);
  CHECK(g[2] == doctest::Approx(100.0));
}

TEST_CASE("power-law forcing") {
  const PowerLawForcing z{4.0};
  CHECK(z(1.0) == doctest::Approx(1.0 / 16.0));
  CHECK(z.integral() == doctest::Approx(1.0 / 3.0));
  CHECK(z.tail_integral(1.0) == doctest::Approx(1.0 / 24.0));
}

TEST_CASE("krt error decays at least at the forcing rate") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  const LatticeRenewal lr = build_lattice_renewal(F, Grid::with_horizon(0.01, 160.0));
  for (double r : {2.0, 4.0}) {
    const DecayCurve c = krt_error_curve(lr, PowerLawForcing{r}, linspace(40.0, 160.0, 25));
    const SlopeFit f = fit_slope(c, 40.0, 160.0, 1e-13);
    CHECK(f.slope <= std::max(1.0 - r, -2.0) + 0.3);
    CHECK(c.points.back().err < c.points.front().err);
  }
}

TEST_CASE("linear forcing error is solver-limited") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  const double h = 0.02;
  const Grid g = Grid::with_horizon(h, 40.0);
  const RenewalSolution s = solve_renewal_equation(F, linear_forcing(F, g));
  for (std::size_t k = 0; k < g.size(); k += 100) CHECK(std::fabs(s.Z[k] - F.rate_m() * g.x(k)) <= 100.0 * h * h);
}

TEST_CASE("tv decay curve and analytic krt agree in trend") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  const LatticeRenewal lr = build_lattice_renewal(F, Grid::with_horizon(0.01, 60.0));
  const DecayCurve tv = tv_decay_curve(lr, {2.0, 4.0, 8.0});
  CHECK(tv.points[0].err > tv.points[1].err);
  CHECK(tv.points[1].err > tv.points[2].err);
  const DecayCurve a = krt_error_curve_analytic(lr, PowerLawForcing{2.0}, {10.0, 20.0, 40.0});
  CHECK(a.points[0].err > a.points[2].err);
  CHECK_THROWS_AS(krt_error_curve(lr, PowerLawForcing{2.0}, {100.0}), Error);
}
