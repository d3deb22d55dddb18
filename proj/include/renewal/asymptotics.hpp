#pragma once

#include <string>
#include <vector>

#include "renewal/distributions.hpp"
#include "renewal/grid.hpp"
#include "renewal/renewal_numerics.hpp"

namespace renewal {

struct DecayPoint {
  double x = 0.0;
  double err = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  std::string label;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t used = 0;
  std::size_t below_floor = 0;
};

// z(y) = (1 + y)^(-r)
struct PowerLawForcing {
  double r = 2.0;
  double operator()(double y) const;
  double integral() const;                   // over [0, inf)
  double tail_integral(double x) const;      // over [x, inf)
  GridFunction on(const Grid& g) const;
};

// err(x) = |Phi * z(x) - m_h T_h[z]| where T_h is the infinite-lattice trapezoid sum.
DecayCurve krt_error_curve(const LatticeRenewal& lr, const PowerLawForcing& z, const std::vector<double>& xs);

// err(x) = |Phi * z(x) - m int z| against the exact limit.
DecayCurve krt_error_curve_analytic(const LatticeRenewal& lr, const PowerLawForcing& z,
                                    const std::vector<double>& xs);

DecayCurve tv_decay_curve(const LatticeRenewal& lr, const std::vector<double>& ts,
                          TvMode mode = TvMode::grid_consistent);

SlopeFit fit_slope(const DecayCurve& curve, double x_lo, double x_hi, double floor);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace renewal
