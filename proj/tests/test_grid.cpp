#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "renewal/error.hpp"
#include "renewal/grid.hpp"
#include "renewal/stats.hpp"

using namespace renewal;
using boost::math::quadrature::gauss_kronrod;

namespace {

GridMeasure random_measure(const Grid& g, Rng& rng, double atom) {
  GridMeasure m(g, atom);
  for (auto& d : m.density) d = rng.uniform();
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::fabs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g = Grid::with_horizon(0.25, 10.0);
  CHECK(g.n == 40);
  CHECK(g.horizon() == doctest::Approx(10.0));
  CHECK(g.nearest(3.1) == 12);
  CHECK(g.nearest(-1.0) == 0);
  CHECK(g.nearest(99.0) == 40);
}

TEST_CASE("interpolation is linear between nodes") {
  const Grid g = Grid::with_horizon(0.5, 4.0);
  const GridFunction f = tabulate(g, [](double x) { return 3.0 * x + 1.0; });
  CHECK(f.at(1.3) == doctest::Approx(4.9));
  CHECK(f.at(10.0) == doctest::Approx(13.0));
}

TEST_CASE("convolution with the unit atom is the identity") {
  const Grid g = Grid::with_horizon(0.01, 5.0);
  const GridFunction z = tabulate(g, [](double x) { return std::sin(x) + x * x; });
  const GridFunction out = convolve_measure_function(GridMeasure::delta(g), z);
  CHECK(max_abs_diff(out.values, z.values) == 0.0);
}

TEST_CASE("unit density against constant forcing integrates") {
  const Grid g = Grid::with_horizon(0.01, 5.0);
  GridMeasure phi(g, 0.5);
  std::fill(phi.density.begin(), phi.density.end(), 1.0);
  const GridFunction out = convolve_measure_function(phi, GridFunction(g, 1.0));
  for (std::size_t k = 0; k < g.size(); k += 37) CHECK(out[k] == doctest::Approx(g.x(k) + 0.5).epsilon(1e-12));
}

TEST_CASE("measure-function convolution matches fine quadrature") {
  const Grid g = Grid::with_horizon(0.01, 6.0);
  GridMeasure phi(g, 1.0);
  std::fill(phi.density.begin(), phi.density.end(), 1.0);  // exponential(1) renewal measure
  const GridFunction z = tabulate(g, [](double x) { return std::exp(-x); });
  const GridFunction out = convolve_measure_function(phi, z);
  for (double t : {0.5, 2.0, 5.0}) {
    const double q = std::exp(-t) + gauss_kronrod<double, 61>::integrate([&](double u) { return std::exp(-(t - u)); }, 0.0, t);
    CHECK(out.at(t) == doctest::Approx(q).epsilon(1e-4));
  }
}

TEST_CASE("convolution of measures: identity, uniform triangle") {
  const Grid g = Grid::with_horizon(0.001, 3.0);
  Rng rng(1);
  const GridMeasure nu = random_measure(g, rng, 0.3);
  const GridMeasure id = convolve_measures(GridMeasure::delta(g), nu);
  CHECK(id.atom0 == doctest::Approx(nu.atom0));
  CHECK(max_abs_diff(id.density, nu.density) < 1e-12);

  GridMeasure u(g);
  for (std::size_t k = 0; k <= 1000; ++k) u.density[k] = 1.0;
  u.density[1000] = 0.5;  // jump at 1
  const GridMeasure tri = convolve_measures(u, u);
  for (double x : {0.25, 0.5, 1.0, 1.5, 1.8}) {
    const double exact = x <= 1.0 ? x : 2.0 - x;
    CHECK(tri.density[g.nearest(x)] == doctest::Approx(exact).epsilon(5e-3));
  }
}

TEST_CASE("convolution is commutative and associative") {
  const Grid g = Grid::with_horizon(0.05, 4.0);
  Rng rng(2);
  const GridMeasure a = random_measure(g, rng, 0.1), b = random_measure(g, rng, 0.0), c = random_measure(g, rng, 0.7);
  const GridMeasure ab = convolve_measures(a, b), ba = convolve_measures(b, a);
  CHECK(max_abs_diff(ab.density, ba.density) < 1e-12);
  const GridMeasure l = convolve_measures(ab, c), r = convolve_measures(a, convolve_measures(b, c));
  CHECK(l.atom0 == doctest::Approx(r.atom0));
  CHECK(max_abs_diff(l.density, r.density) < 1e-10);
}

TEST_CASE("mass is conserved up to the truncation") {
  const Grid g = Grid::with_horizon(0.01, 4.0);
  Rng rng(3);
  const GridMeasure a = random_measure(g, rng, 0.2), b = random_measure(g, rng, 0.4);
  const GridMeasure ab = convolve_measures(a, b);
  auto lattice_total = [](const GridMeasure& m) {
    double s = 0.0;
    for (double p : m.lattice_masses()) s += p;
    return s;
  };
  CHECK(ab.mass() + ab.truncated_mass == doctest::Approx(lattice_total(a) * lattice_total(b)).epsilon(1e-12));
}

TEST_CASE("refinement ratio of the convolution is about four") {
  auto at2 = [](double h) {
    const Grid g = Grid::with_horizon(h, 4.0);
    GridMeasure e(g);
    for (std::size_t k = 0; k < g.size(); ++k) e.density[k] = 1.0 / ((1.0 + g.x(k)) * (1.0 + g.x(k)));
    return convolve_measures(e, e).density[g.nearest(2.0)];
  };
  const double ratio = std::fabs(at2(0.04) - at2(0.02)) / std::fabs(at2(0.02) - at2(0.01));
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("mismatched grids are rejected") {
  const GridMeasure a(Grid::with_horizon(0.1, 1.0)), b(Grid::with_horizon(0.05, 1.0));
  CHECK_THROWS_AS(convolve_measures(a, b), Error);
  try {
    convolve_measures(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::incompatible_grids);
  }
}

TEST_CASE("total variation examples and metric properties") {
  const Grid g = Grid::with_horizon(0.001, 30.0);
  const GridMeasure e1 = measure_from_density(tabulate(g, [](double x) { return std::exp(-x); }));
  const GridMeasure e2 = measure_from_density(tabulate(g, [](double x) { return 2.0 * std::exp(-2.0 * x); }));
  CHECK(tv_distance(e1, e1) == 0.0);
  const double oracle =
      gauss_kronrod<double, 61>::integrate([](double x) { return std::fabs(std::exp(-x) - 2.0 * std::exp(-2.0 * x)); }, 0.0,
                                           std::log(2.0)) +
      gauss_kronrod<double, 61>::integrate([](double x) { return std::fabs(std::exp(-x) - 2.0 * std::exp(-2.0 * x)); },
                                           std::log(2.0), 60.0);
  CHECK(tv_distance(e1, e2) == doctest::Approx(oracle).epsilon(1e-4));

  const Grid gu = Grid::with_horizon(0.01, 4.0);
  GridMeasure a(gu), b(gu);
  for (std::size_t k = 0; k < 100; ++k) a.density[k] = 1.0;
  for (std::size_t k = 201; k < 300; ++k) b.density[k] = 1.0;
  a.density[100] = b.density[200] = b.density[300] = 0.5;
  CHECK(a.mass() == doctest::Approx(1.0));
  CHECK(b.mass() == doctest::Approx(1.0));
  CHECK(tv_distance(a, b) == doctest::Approx(2.0));

  const GridMeasure e3 = measure_from_density(tabulate(g, [](double x) { return 0.5 * std::exp(-0.5 * x); }));
  CHECK(tv_distance(e1, e2) == doctest::Approx(tv_distance(e2, e1)));
  CHECK(tv_distance(e1, e3) <= tv_distance(e1, e2) + tv_distance(e2, e3) + 1e-12);
  GridMeasure half = e1;
  half.atom0 += 0.5;
  CHECK_THROWS_AS(tv_distance(half, e2), Error);
}

TEST_CASE("meet and subtract decompose a measure") {
  const Grid g = Grid::with_horizon(0.01, 5.0);
  Rng rng(4);
  const GridMeasure a = random_measure(g, rng, 0.3), b = random_measure(g, rng, 0.1);
  const GridMeasure m = meet(a, b);
  const GridMeasure rest = subtract(a, m);
  CHECK(m.atom0 == doctest::Approx(0.1));
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(m.density[k] <= std::min(a.density[k], b.density[k]));
    CHECK(rest.density[k] + m.density[k] == doctest::Approx(a.density[k]));
  }
}

TEST_CASE("csv round trip") {
  const Grid g = Grid::with_horizon(0.1, 3.0);
  Rng rng(5);
  const GridMeasure m = random_measure(g, rng, 0.25);
  const auto dir = std::filesystem::temp_directory_path() / "renewal_lab_grid_test";
  std::filesystem::create_directories(dir);
  write_csv(m, (dir / "m.csv").string());
  const GridMeasure back = read_measure_csv((dir / "m.csv").string());
  CHECK(back.atom0 == m.atom0);
  CHECK(back.grid.n == g.n);
  CHECK(max_abs_diff(back.density, m.density) == 0.0);
  write_csv(m.density_function(), (dir / "f.csv").string());
  const GridFunction f = read_function_csv((dir / "f.csv").string());
  CHECK(max_abs_diff(f.values, m.density) == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("measure sampler reproduces the piecewise-linear law") {
  const Grid g = Grid::with_horizon(0.05, 3.0);
  const GridMeasure m = measure_from_density(tabulate(g, [](double x) { return x < 2.0 ? 0.35 * x : 0.0; }), 0.3);
  const MeasureSampler s(m);
  CHECK(s.total() == doctest::Approx(m.mass()));
  Rng rng(6);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = s.sample(rng);
  const auto cum = m.cumulative();
  std::size_t atoms = 0;
  std::vector<double> cont;
  for (double x : xs) {
    if (x == 0.0) ++atoms;
    else cont.push_back(x);
  }
  CHECK(std::fabs(atoms / 20000.0 - 0.3 / s.total()) < 4.0 * std::sqrt(0.25 / 20000.0));
  const double a = m.atom0;
  CHECK(ks_statistic(cont, [&](double x) { return std::min(1.0, (0.175 * x * x) / (s.total() - a)); }) <
        ks_critical(static_cast<double>(cont.size()), 0.001));
}
