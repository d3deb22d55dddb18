#pragma once

#include <vector>

#include "renewal/distributions.hpp"
#include "renewal/grid.hpp"

namespace renewal {

// Trapezoid discretization of F on a grid, normalized so the infinite-lattice
// trapezoid mass is exactly one, together with its renewal measure.
struct LatticeRenewal {
  DistributionSpec F;
  Grid grid;
  GridMeasure kernel;   // density f / S0, no atom
  double raw_mass = 1.0;  // S0
  double lattice_mean = 1.0;  // S1 / S0
  double m_h = 1.0;     // 1 / lattice_mean, the discrete renewal density limit
  GridMeasure phi;      // renewal measure, atom 1 at zero
};

LatticeRenewal build_lattice_renewal(const DistributionSpec& F, const Grid& grid);

// Solves Psi = delta + K * Psi in the lattice algebra used by convolve_measures.
GridMeasure lattice_renewal_solve(const GridMeasure& kernel);

GridMeasure renewal_measure(const DistributionSpec& F, const Grid& grid);

struct RenewalSolution {
  GridFunction Z;
  GridFunction z;
  GridMeasure phi;
  double residual = 0.0;
};

RenewalSolution solve_renewal_equation(const DistributionSpec& F, const GridFunction& z);
RenewalSolution solve_renewal_equation(const LatticeRenewal& lr, const GridFunction& z);

GridFunction linear_forcing(const DistributionSpec& F, const Grid& grid);

// Law of the forward recurrence time B_t as a CDF on an x-grid covering
// [0, x_q] with x_q the 1 - 1e-6 quantile of F.
struct RecurrenceLaw {
  double t = 0.0;
  GridFunction cdf;
  double tail_mass = 0.0;  // 1 - cdf at the last node
};

Grid recurrence_x_grid(const DistributionSpec& F, double h);
RecurrenceLaw forward_recurrence_cdf(const LatticeRenewal& lr, double t, const Grid& xgrid);
RecurrenceLaw forward_recurrence_cdf(const DistributionSpec& F, double t, const Grid& xgrid);

// Density of B_t at x by quadrature of f(t + x - u) against the renewal
// measure. Beyond the renewal horizon the renewal density is taken as m_h.
double forward_recurrence_density(const LatticeRenewal& lr, double t, double x);

enum class TvMode {
  analytic,          // central-difference density of the B_t CDF vs m F-bar
  grid_consistent,   // against the lattice stationary law with limit m_h
};

double tv_to_stationary(const LatticeRenewal& lr, double t, const Grid& xgrid,
                        TvMode mode = TvMode::grid_consistent);
double tv_to_stationary(const DistributionSpec& F, double t, const Grid& xgrid,
                        TvMode mode = TvMode::analytic);

// h sum_{i > k} g(x_i) on the infinite lattice, from an explicit sum to
// `explicit_terms` nodes past k and an Euler-Maclaurin tail.
template <class G, class TailIntegral>
double lattice_tail_sum(double h, std::size_t k, std::size_t explicit_terms, G&& g, TailIntegral&& tail) {
  double s = 0.0;
  const std::size_t last = k + explicit_terms;
  for (std::size_t i = k + 1; i <= last; ++i) s += g(static_cast<double>(i) * h);
  const double xm = static_cast<double>(last) * h;
  const double gm = g(xm);
  const double dg = (g(xm + 0.5 * h) - g(xm - 0.5 * h)) / h;
  return h * s + tail(xm) - 0.5 * h * gm - h * h / 12.0 * dg;
}

}  // namespace renewal
