#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "renewal/asymptotics.hpp"
#include "renewal/stone.hpp"

using namespace renewal;

TEST_CASE("uniform component of exponential(1)") {
  const auto F = DistributionSpec::exponential(1.0);
  const UniformComponent c = find_uniform_component(F, Grid::with_horizon(0.01, 20.0), 1);
  CHECK(c.n0 == 1);
  CHECK(c.mass > 0.0);
  CHECK(c.a >= 0.0);
  CHECK(c.a + c.b <= 2.0 + 1e-12);
  // level never exceeds the density on the window
  CHECK(c.level() <= std::exp(-(c.a + c.b)) + 1e-12);
  CHECK(c.mass == doctest::Approx(0.9 * c.b * std::exp(-(c.a + c.b))).epsilon(1e-2));
}

TEST_CASE("uniform component of uniform(1,2) is flat") {
  const UniformComponent c = find_uniform_component(DistributionSpec::uniform(1.0, 2.0), Grid::with_horizon(0.005, 20.0), 4);
  CHECK(c.n0 == 1);
  CHECK(c.a >= 1.0 - 1e-12);
  CHECK(c.a + c.b <= 2.0 + 1e-12);
  CHECK(c.level() == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("uniform component of gamma(2,1) is found at n0 = 1") {
  const UniformComponent c = find_uniform_component(DistributionSpec::gamma(2.0, 1.0), Grid::with_horizon(0.01, 40.0), 4);
  CHECK(c.n0 == 1);
  CHECK(c.mass >= 0.05);
  const double lo = std::min(c.a * std::exp(-c.a), (c.a + c.b) * std::exp(-(c.a + c.b)));
  CHECK(c.level() <= lo + 1e-9);
}

TEST_CASE("decomposition invariants") {
  for (const auto& F : {DistributionSpec::exponential(1.0), DistributionSpec::gamma(2.0, 1.0), DistributionSpec::uniform(1.0, 2.0)}) {
    CAPTURE(F.describe());
    const StoneDecomposition dec = stone_decompose(F, Grid::with_horizon(F.mean() / 100.0, 100.0 * F.mean()));
    CHECK(dec.reconstruction_error <= 1e-6);
    CHECK(dec.factored_form_error <= 1e-4);
    CHECK(dec.phi2_mass + phi2_truncation_bound(dec) == doctest::Approx(dec.component.n0 / dec.component.mass).epsilon(1e-6));
    CHECK(dec.H_mass == doctest::Approx(1.0 - dec.component.mass).epsilon(1e-6));
    CHECK(dec.Phi0_2.mass() == doctest::Approx(1.0 / dec.component.mass).epsilon(1e-6));
    CHECK(std::fabs(dec.phi1.values.back() - F.rate_m()) <= 0.02 * F.rate_m());
    CHECK(phi2_tail(dec, 0.0) == doctest::Approx(dec.phi2_mass + phi2_truncation_bound(dec)));
    double prev = phi2_tail(dec, 0.0);
    for (double x = 0.5; x < 90.0 * F.mean(); x += 3.7 * F.mean()) {
      const double v = phi2_tail(dec, x);
      CHECK(v <= prev + 1e-15);
      prev = v;
    }
    CHECK(phi2_tail(dec, 1e6) == doctest::Approx(phi2_truncation_bound(dec)));
    double sup = 0.0;
    for (double v : dec.phi1.values) sup = std::max(sup, v);
    const double bound = dec.component.level() * dec.Phi.cumulative()[dec.Phi.grid.nearest(dec.component.b)] * dec.Phi0_2.mass();
    CHECK(sup <= bound * 1.01);
  }
}

TEST_CASE("gamma Phi2 tail decays faster than x^-3") {
  const auto F = DistributionSpec::gamma(2.0, 1.0);
  const StoneDecomposition dec = stone_decompose(F, Grid::with_horizon(0.01, 60.0));
  DecayCurve c;
  for (double x : linspace(10.0, 40.0, 13)) c.points.push_back({x, phi2_tail(dec, x)});
  CHECK(fit_slope(c, 10.0, 40.0, 1e-300).slope < -3.0);
}
