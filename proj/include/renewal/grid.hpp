#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "renewal/rng.hpp"

namespace renewal {

// Uniform grid with nodes x_k = k h, k = 0..n.
struct Grid {
  double h = 0.0;
  std::size_t n = 0;

  static Grid with_horizon(double h, double horizon);

  double x(std::size_t k) const { return static_cast<double>(k) * h; }
  double horizon() const { return static_cast<double>(n) * h; }
  std::size_t size() const { return n + 1; }
  // Index of the node nearest to x, clamped to [0, n].
  std::size_t nearest(double x) const;
};

bool same_grid(const Grid& a, const Grid& b);

struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }
  // Linear interpolation; x outside [0, horizon] is clamped.
  double at(double x) const;
};

// Atom at 0 plus a density on the nodes. Mass is atom0 plus the trapezoid
// integral of the density.
struct GridMeasure {
  Grid grid;
  double atom0 = 0.0;
  std::vector<double> density;
  // Mass the last convolution pushed past the horizon.
  double truncated_mass = 0.0;

  GridMeasure() = default;
  explicit GridMeasure(const Grid& g, double atom = 0.0) : grid(g), atom0(atom), density(g.size(), 0.0) {}

  static GridMeasure delta(const Grid& g) { return GridMeasure(g, 1.0); }

  double mass() const;
  // Mass of [0, x_k] with the trapezoid rule (atom included).
  std::vector<double> cumulative() const;
  // Lattice masses p_0 = atom0 + h d_0 / 2, p_k = h d_k.
  std::vector<double> lattice_masses() const;
  GridFunction density_function() const;
};

double trapezoid(const std::vector<double>& v, double h);
std::vector<double> cumulative_trapezoid(const std::vector<double>& v, double h);

template <class F>
GridFunction tabulate(const Grid& g, F&& f) {
  GridFunction out(g);
  for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = f(g.x(k));
  return out;
}

// (Phi * z)(x_k) = atom0 z(x_k) + trapezoid sum of z(x_k - u) density(u) over [0, x_k].
GridFunction convolve_measure_function(const GridMeasure& phi, const GridFunction& z);

// Cauchy product of lattice masses, truncated at the horizon. Associative and
// commutative to rounding.
GridMeasure convolve_measures(const GridMeasure& mu, const GridMeasure& nu);

GridMeasure meet(const GridMeasure& mu, const GridMeasure& nu);
GridMeasure subtract(const GridMeasure& mu, const GridMeasure& nu);

// |atom difference| + trapezoid integral of |density difference|. Both inputs
// must be probability measures to within 1e-6.
double tv_distance(const GridMeasure& mu, const GridMeasure& nu);
double tv_distance(const GridFunction& p, const GridFunction& q);

GridMeasure measure_from_density(const GridFunction& density, double atom0 = 0.0);

void write_csv(const GridFunction& f, const std::string& path);
void write_csv(const GridMeasure& m, const std::string& path);
GridFunction read_function_csv(const std::string& path);
GridMeasure read_measure_csv(const std::string& path);

// Draws from a GridMeasure read as atom plus piecewise-linear density.
class MeasureSampler {
 public:
  explicit MeasureSampler(const GridMeasure& m);
  double total() const { return total_; }
  double sample(Rng& rng) const;
  double sample_from_uniform(double u) const;

 private:
  Grid grid_;
  double atom_;
  std::vector<double> density_;
  std::vector<double> cell_cum_;
  double total_;
};

}  // namespace renewal
