#include "renewal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "renewal/error.hpp"

namespace renewal {

Grid Grid::with_horizon(double h, double horizon) {
  if (!(h > 0.0) || !(horizon >= h))
    throw Error(ErrorCode::invalid_parameter, "grid needs h > 0 and horizon >= h");
  Grid g;
  g.h = h;
  g.n = static_cast<std::size_t>(std::llround(horizon / h));
  return g;
}

std::size_t Grid::nearest(double x) const {
  if (x <= 0.0) return 0;
  const double k = std::round(x / h);
  if (k >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(k);
}

bool same_grid(const Grid& a, const Grid& b) {
  return a.n == b.n && std::fabs(a.h - b.h) <= 1e-14 * std::max(a.h, b.h);
}

namespace {

void require_same(const Grid& a, const Grid& b) {
  if (!same_grid(a, b)) throw Error(ErrorCode::incompatible_grids, "operands live on different grids");
}

void require_normalized(double mass, const char* which) {
  if (std::fabs(mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os << which << " has mass " << std::setprecision(10) << mass;
    throw Error(ErrorCode::not_normalized, os.str());
  }
}

}  // namespace

double GridFunction::at(double x) const {
  if (x <= 0.0) return values.front();
  const double pos = x / grid.h;
  if (pos >= static_cast<double>(grid.n)) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

double trapezoid(const std::vector<double>& v, double h) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t k = 1; k + 1 < v.size(); ++k) s += v[k];
  return s * h;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& v, double h) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) out[k] = out[k - 1] + 0.5 * h * (v[k - 1] + v[k]);
  return out;
}

double GridMeasure::mass() const { return atom0 + trapezoid(density, grid.h); }

std::vector<double> GridMeasure::cumulative() const {
  auto c = cumulative_trapezoid(density, grid.h);
  for (auto& v : c) v += atom0;
  return c;
}

std::vector<double> GridMeasure::lattice_masses() const {
  std::vector<double> p(density.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = grid.h * density[k];
  p[0] = atom0 + 0.5 * grid.h * density[0];
  return p;
}

GridFunction GridMeasure::density_function() const {
  GridFunction f(grid);
  f.values = density;
  return f;
}

GridMeasure measure_from_density(const GridFunction& density, double atom0) {
  GridMeasure m(density.grid, atom0);
  m.density = density.values;
  return m;
}

GridFunction convolve_measure_function(const GridMeasure& phi, const GridFunction& z) {
  require_same(phi.grid, z.grid);
  const double h = phi.grid.h;
  const std::size_t N = phi.grid.size();
  GridFunction out(z.grid);
  const double* d = phi.density.data();
  const double* zv = z.values.data();
  for (std::size_t k = 0; k < N; ++k) {
    double s = 0.0;
    if (k > 0) {
      s = 0.5 * (d[0] * zv[k] + d[k] * zv[0]);
      for (std::size_t j = 1; j < k; ++j) s += d[j] * zv[k - j];
    }
    out.values[k] = phi.atom0 * zv[k] + h * s;
  }
  return out;
}

GridMeasure convolve_measures(const GridMeasure& mu, const GridMeasure& nu) {
  require_same(mu.grid, nu.grid);
  const double h = mu.grid.h;
  const std::size_t N = mu.grid.size();
  const auto p = mu.lattice_masses();
  const auto q = nu.lattice_masses();
  std::vector<double> c(N, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += p[j] * q[k - j];
    c[k] = s;
  }
  GridMeasure out(mu.grid, mu.atom0 * nu.atom0);
  for (std::size_t k = 1; k < N; ++k) out.density[k] = c[k] / h;
  out.density[0] = (c[0] - out.atom0) / (0.5 * h);
  double sp = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    sp += p[k];
    sq += q[k];
  }
  double in_horizon = 0.0;
  for (std::size_t k = 0; k + 1 < N; ++k) in_horizon += c[k];
  in_horizon += 0.5 * c[N - 1];
  out.truncated_mass = std::max(0.0, sp * sq - in_horizon);
  return out;
}

GridMeasure meet(const GridMeasure& mu, const GridMeasure& nu) {
  require_same(mu.grid, nu.grid);
  GridMeasure out(mu.grid, std::min(mu.atom0, nu.atom0));
  for (std::size_t k = 0; k < out.density.size(); ++k)
    out.density[k] = std::min(mu.density[k], nu.density[k]);
  return out;
}

GridMeasure subtract(const GridMeasure& mu, const GridMeasure& nu) {
  require_same(mu.grid, nu.grid);
  GridMeasure out(mu.grid, mu.atom0 - nu.atom0);
  for (std::size_t k = 0; k < out.density.size(); ++k) out.density[k] = mu.density[k] - nu.density[k];
  return out;
}

double tv_distance(const GridMeasure& mu, const GridMeasure& nu) {
  require_same(mu.grid, nu.grid);
  require_normalized(mu.mass(), "first measure");
  require_normalized(nu.mass(), "second measure");
  std::vector<double> diff(mu.density.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = std::fabs(mu.density[k] - nu.density[k]);
  return std::fabs(mu.atom0 - nu.atom0) + trapezoid(diff, mu.grid.h);
}

double tv_distance(const GridFunction& p, const GridFunction& q) {
  return tv_distance(measure_from_density(p), measure_from_density(q));
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::config, "cannot write " + path);
  os << std::setprecision(17) << "x,value\n";
  for (std::size_t k = 0; k < f.values.size(); ++k) os << f.grid.x(k) << ',' << f.values[k] << '\n';
}

void write_csv(const GridMeasure& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::config, "cannot write " + path);
  os << std::setprecision(17) << "# atom0=" << m.atom0 << "\nx,density\n";
  for (std::size_t k = 0; k < m.density.size(); ++k) os << m.grid.x(k) << ',' << m.density[k] << '\n';
}

namespace {

void read_columns(std::istream& is, std::vector<double>& xs, std::vector<double>& vs, double& atom) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# atom0=", 0) == 0) {
      atom = std::stod(line.substr(8));
      continue;
    }
    if (line[0] == '#' || line[0] == 'x') continue;
    const auto comma = line.find(',');
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 2) throw Error(ErrorCode::config, "csv needs at least two rows");
}

Grid grid_from_nodes(const std::vector<double>& xs) {
  Grid g;
  g.n = xs.size() - 1;
  g.h = xs.back() / static_cast<double>(g.n);
  return g;
}

}  // namespace

GridFunction read_function_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config, "cannot read " + path);
  std::vector<double> xs, vs;
  double atom = 0.0;
  read_columns(is, xs, vs, atom);
  GridFunction f(grid_from_nodes(xs));
  f.values = vs;
  return f;
}

GridMeasure read_measure_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::config, "cannot read " + path);
  std::vector<double> xs, vs;
  double atom = 0.0;
  read_columns(is, xs, vs, atom);
  GridMeasure m(grid_from_nodes(xs), atom);
  m.density = vs;
  return m;
}

MeasureSampler::MeasureSampler(const GridMeasure& m)
    : grid_(m.grid), atom_(m.atom0), density_(m.density), cell_cum_(m.grid.n + 1, 0.0) {
  for (auto& d : density_) d = std::max(d, 0.0);
  atom_ = std::max(atom_, 0.0);
  for (std::size_t k = 0; k < grid_.n; ++k)
    cell_cum_[k + 1] = cell_cum_[k] + 0.5 * grid_.h * (density_[k] + density_[k + 1]);
  total_ = atom_ + cell_cum_.back();
}

double MeasureSampler::sample(Rng& rng) const { return sample_from_uniform(rng.uniform()); }

double MeasureSampler::sample_from_uniform(double u) const {
  double r = u * total_;
  if (r < atom_) return 0.0;
  r -= atom_;
  auto it = std::upper_bound(cell_cum_.begin(), cell_cum_.end(), r);
  std::size_t k = static_cast<std::size_t>(it - cell_cum_.begin());
  k = std::clamp<std::size_t>(k, 1, grid_.n) - 1;
  while (k + 1 < grid_.n && cell_cum_[k + 1] - cell_cum_[k] <= 0.0) ++k;
  const double rem = std::clamp(r - cell_cum_[k], 0.0, cell_cum_[k + 1] - cell_cum_[k]);
  const double d0 = density_[k];
  const double slope = (density_[k + 1] - d0) / grid_.h;
  // Solve d0 s + slope s^2 / 2 = rem for s in [0, h].
  const double disc = std::max(0.0, d0 * d0 + 2.0 * slope * rem);
  const double denom = d0 + std::sqrt(disc);
  const double s = denom > 0.0 ? 2.0 * rem / denom : 0.0;
  return grid_.x(k) + std::clamp(s, 0.0, grid_.h);
}

}  // namespace renewal
