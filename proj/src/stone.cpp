#include "renewal/stone.hpp"

#include <algorithm>
#include <cmath>

#include "renewal/error.hpp"

namespace renewal {
namespace {

struct Window {
  double mass = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
};

Window best_window(const GridMeasure& Fn, double mean, int n) {
  const Grid& g = Fn.grid;
  Window best;
  const double a_max = std::min(10.0 * n * mean, g.horizon() - mean);
  for (int ai = 0;; ++ai) {
    const double a = 0.1 * ai * mean;
    if (a > a_max) break;
    for (double bf : {0.25, 0.5, 1.0}) {
      const std::size_t ia = g.nearest(a);
      const std::size_t ib = g.nearest(a + bf * mean);
      if (ib <= ia || ib >= g.n) continue;
      double lo = Fn.density[ia];
      for (std::size_t k = ia; k <= ib; ++k) lo = std::min(lo, Fn.density[k]);
      const double b = static_cast<double>(ib - ia) * g.h;
      const double mass = b * lo;
      if (mass > best.mass) best = Window{mass, g.x(ia), b, ia, ib};
    }
  }
  return best;
}

}  // namespace

UniformComponent find_uniform_component(const LatticeRenewal& lr, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::invalid_parameter, "n_max must be >= 1");
  GridMeasure Fn = lr.kernel;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) Fn = convolve_measures(Fn, lr.kernel);
    const Window w = best_window(Fn, lr.F.mean(), n);
    if (w.mass >= 0.05) {
      UniformComponent c;
      c.n0 = n;
      c.a = w.a;
      c.b = w.b;
      c.mass = 0.9 * w.mass;
      c.ia = w.ia;
      c.ib = w.ib;
      return c;
    }
  }
  throw Error(ErrorCode::no_component_found, "no uniform component up to n_max");
}

UniformComponent find_uniform_component(const DistributionSpec& F, const Grid& grid, int n_max) {
  return find_uniform_component(build_lattice_renewal(F, grid), n_max);
}

StoneDecomposition stone_decompose(const LatticeRenewal& lr, int n_max) {
  StoneDecomposition dec;
  dec.component = find_uniform_component(lr, n_max);
  const UniformComponent& c = dec.component;
  const Grid& g = lr.grid;

  std::vector<GridMeasure> powers;  // F^{*0} .. F^{*n0}
  powers.push_back(GridMeasure::delta(g));
  powers.push_back(lr.kernel);
  for (int k = 2; k <= c.n0; ++k) powers.push_back(convolve_measures(powers.back(), lr.kernel));

  dec.G0 = GridMeasure(g);
  for (std::size_t k = c.ia; k <= c.ib; ++k) dec.G0.density[k] = c.level();
  if (c.ia > 0) dec.G0.density[c.ia] *= 0.5;
  dec.G0.density[c.ib] *= 0.5;

  dec.H = subtract(powers[c.n0], dec.G0);
  for (auto& d : dec.H.density) {
    if (d < -1e-8) throw Error(ErrorCode::negative_h, "F^{*n0} - G0 is negative");
    d = std::max(d, 0.0);
  }
  dec.H.atom0 = std::max(dec.H.atom0, 0.0);
  dec.H_mass = dec.H.mass();

  dec.Phi0_2 = lattice_renewal_solve(dec.H);
  dec.Phi2 = GridMeasure(g);
  for (int k = 0; k < c.n0; ++k) {
    const GridMeasure term = convolve_measures(powers[k], dec.Phi0_2);
    dec.Phi2.atom0 += term.atom0;
    for (std::size_t i = 0; i < g.size(); ++i) dec.Phi2.density[i] += term.density[i];
    dec.Phi2.truncated_mass += term.truncated_mass;
  }
  dec.phi2_mass = dec.Phi2.mass();

  dec.Phi = lr.phi;
  const GridMeasure Phi1 = subtract(dec.Phi, dec.Phi2);
  dec.phi1 = Phi1.density_function();

  // Phi1 = G0 * Psi * Phi
  const GridMeasure factored = convolve_measures(convolve_measures(dec.G0, dec.Phi0_2), dec.Phi);
  {
    const auto cum_phi = dec.Phi.cumulative();
    const auto cum_1 = factored.cumulative();
    const auto cum_2 = dec.Phi2.cumulative();
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      worst = std::max(worst, std::fabs(cum_1[k] + cum_2[k] - cum_phi[k]));
      scale = std::max(scale, std::fabs(cum_phi[k]));
    }
    dec.reconstruction_error = worst / scale;
  }
  {
    const GridFunction g0 = dec.G0.density_function();
    const GridFunction inner = convolve_measure_function(dec.Phi, g0);
    const GridFunction outer = convolve_measure_function(dec.Phi0_2, inner);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 1; k < g.size(); ++k) {
      worst = std::max(worst, std::fabs(outer[k] - dec.phi1[k]));
      scale = std::max(scale, std::fabs(dec.phi1[k]));
    }
    dec.factored_form_error = scale > 0.0 ? worst / scale : 0.0;
  }
  return dec;
}

StoneDecomposition stone_decompose(const DistributionSpec& F, const Grid& grid) {
  return stone_decompose(build_lattice_renewal(F, grid));
}

double phi2_truncation_bound(const StoneDecomposition& dec) {
  return std::max(0.0, dec.component.n0 / dec.component.mass - dec.phi2_mass);
}

double phi2_tail(const StoneDecomposition& dec, double x) {
  const Grid& g = dec.Phi2.grid;
  const double bound = phi2_truncation_bound(dec);
  if (x > g.horizon()) return bound;
  if (x <= 0.0) return dec.phi2_mass + bound;
  const double pos = x / g.h;
  const auto k = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(k);
  const auto& d = dec.Phi2.density;
  double tail = 0.0;
  for (std::size_t i = k + 1; i < g.n; ++i) tail += 0.5 * g.h * (d[i] + d[i + 1]);
  if (k < g.n) {
    const double dx = d[k] + (d[k + 1] - d[k]) * frac;
    tail += 0.5 * (1.0 - frac) * g.h * (dx + d[k + 1]);
  }
  return tail + bound;
}

}  // namespace renewal
