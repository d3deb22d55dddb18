#pragma once

#include <vector>

#include "renewal/distributions.hpp"
#include "renewal/grid.hpp"
#include "renewal/renewal_numerics.hpp"

namespace renewal {

struct UniformComponent {
  int n0 = 1;
  double a = 0.0;
  double b = 0.0;
  double mass = 0.0;
  std::size_t ia = 0;  // window nodes [ia, ib]
  std::size_t ib = 0;
  double level() const { return mass / b; }
};

struct StoneDecomposition {
  UniformComponent component;
  GridMeasure G0;
  GridMeasure H;
  GridMeasure Phi0_2;  // Psi = sum_n H^{*n}
  GridMeasure Phi2;
  GridFunction phi1;
  GridMeasure Phi;
  double reconstruction_error = 0.0;  // sup |cum(Phi1 + Phi2) - cum(Phi)| / sup cum(Phi)
  double factored_form_error = 0.0;       // sup |phi1 - Psi * (Phi * g0)| / sup |phi1|
  double phi2_mass = 0.0;              // in-horizon
  double H_mass = 0.0;
};

// Convolution powers F^{*1..n_max} of the normalized kernel.
UniformComponent find_uniform_component(const LatticeRenewal& lr, int n_max);
UniformComponent find_uniform_component(const DistributionSpec& F, const Grid& grid, int n_max);

StoneDecomposition stone_decompose(const LatticeRenewal& lr, int n_max = 8);
StoneDecomposition stone_decompose(const DistributionSpec& F, const Grid& grid);

// In-horizon mass of Phi2 on [x, T] plus the bound on mass lost past T.
double phi2_tail(const StoneDecomposition& dec, double x);
double phi2_truncation_bound(const StoneDecomposition& dec);

}  // namespace renewal
