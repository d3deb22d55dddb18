#include "renewal/renewal_numerics.hpp"

#include <algorithm>
#include <cmath>

#include "renewal/error.hpp"

namespace renewal {

GridMeasure lattice_renewal_solve(const GridMeasure& kernel) {
  const double h = kernel.grid.h;
  const std::size_t N = kernel.grid.size();
  const auto w = kernel.lattice_masses();
  const double diag = 1.0 - w[0];
  if (!(diag > 0.0)) throw Error(ErrorCode::step_too_coarse, "implicit diagonal 1 - w0 is not positive");
  std::vector<double> p(N, 0.0);
  for (std::size_t k = 0; k < N; ++k) {
    double s = k == 0 ? 1.0 : 0.0;
    const double* pk = p.data() + k;
    for (std::size_t j = 1; j <= k; ++j) s += w[j] * *(pk - j);
    p[k] = s / diag;
  }
  GridMeasure out(kernel.grid, 1.0 / (1.0 - kernel.atom0));
  out.density[0] = (p[0] - out.atom0) / (0.5 * h);
  for (std::size_t k = 1; k < N; ++k) out.density[k] = p[k] / h;
  return out;
}

LatticeRenewal build_lattice_renewal(const DistributionSpec& F, const Grid& grid) {
  LatticeRenewal lr{F, grid, GridMeasure(grid), 1.0, 1.0, 1.0, GridMeasure(grid)};
  const double h = grid.h;
  const std::size_t N = grid.size();
  std::vector<double> f(N);
  for (std::size_t k = 0; k < N; ++k) f[k] = F.grid_density(grid.x(k));

  double s0 = 0.5 * f[0];
  double s1 = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    s0 += f[k];
    s1 += grid.x(k) * f[k];
  }
  s0 *= h;
  s1 *= h;
  const std::size_t n = grid.n;
  if (F.survival(grid.horizon()) > 0.0) {
    s0 += lattice_tail_sum(h, n, 0, [&](double x) { return F.pdf(x); },
                           [&](double x) { return F.survival(x); });
    s1 += lattice_tail_sum(h, n, 0, [&](double x) { return x * F.pdf(x); },
                           [&](double x) { return x * F.survival(x) + F.tail_integral(x); });
  }
  lr.raw_mass = s0;
  lr.lattice_mean = s1 / s0;
  lr.m_h = 1.0 / lr.lattice_mean;
  for (std::size_t k = 0; k < N; ++k) lr.kernel.density[k] = f[k] / s0;
  lr.phi = lattice_renewal_solve(lr.kernel);
  return lr;
}

GridMeasure renewal_measure(const DistributionSpec& F, const Grid& grid) {
  return build_lattice_renewal(F, grid).phi;
}

RenewalSolution solve_renewal_equation(const LatticeRenewal& lr, const GridFunction& z) {
  if (!same_grid(lr.grid, z.grid)) throw Error(ErrorCode::incompatible_grids, "forcing grid differs");
  const double h = lr.grid.h;
  const std::size_t N = lr.grid.size();
  const auto& f = lr.kernel.density;
  const double diag = 1.0 - 0.5 * h * f[0];
  if (!(diag > 0.0)) throw Error(ErrorCode::step_too_coarse, "implicit diagonal 1 - h f(0)/2 is not positive");

  RenewalSolution sol{GridFunction(z.grid), z, lr.phi, 0.0};
  auto& Z = sol.Z.values;
  Z[0] = z[0];
  for (std::size_t k = 1; k < N; ++k) {
    double s = 0.5 * f[k] * Z[0];
    for (std::size_t j = 1; j < k; ++j) s += f[j] * Z[k - j];
    Z[k] = (z[k] + h * s) / diag;
  }
  double res = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    double s = 0.5 * (f[0] * Z[k] + f[k] * Z[0]);
    for (std::size_t j = 1; j < k; ++j) s += f[j] * Z[k - j];
    res = std::max(res, std::fabs(Z[k] - z[k] - h * s));
  }
  sol.residual = std::max(res, std::fabs(Z[0] - z[0]));
  return sol;
}

RenewalSolution solve_renewal_equation(const DistributionSpec& F, const GridFunction& z) {
  return solve_renewal_equation(build_lattice_renewal(F, z.grid), z);
}

GridFunction linear_forcing(const DistributionSpec& F, const Grid& grid) {
  GridFunction sbar = tabulate(grid, [&](double x) { return F.survival(x); });
  GridFunction z(grid);
  z.values = cumulative_trapezoid(sbar.values, grid.h);
  for (auto& v : z.values) v *= F.rate_m();
  return z;
}

Grid recurrence_x_grid(const DistributionSpec& F, double h) {
  const double xq = F.quantile(1.0 - 1e-6);
  Grid g;
  g.h = h;
  g.n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(xq / h - 1e-9)));
  return g;
}

namespace {

void require_step(const LatticeRenewal& lr, const Grid& xgrid) {
  if (std::fabs(lr.grid.h - xgrid.h) > 1e-14 * lr.grid.h)
    throw Error(ErrorCode::incompatible_grids, "x-grid step must equal the renewal grid step");
}

void require_horizon(const LatticeRenewal& lr, double t) {
  if (t < 0.0 || t > lr.grid.horizon() * (1.0 + 1e-12))
    throw Error(ErrorCode::horizon_exceeded, "t lies beyond the renewal measure horizon");
}

double trapezoid_weight(std::size_t j, std::size_t K, double h) {
  return (j == 0 || j == K) ? 0.5 * h : h;
}

LatticeRenewal lattice_for(const DistributionSpec& F, double t, double h) {
  const double horizon = std::max(t, 2.0 * h);
  Grid g;
  g.h = h;
  g.n = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
  return build_lattice_renewal(F, g);
}

}  // namespace

RecurrenceLaw forward_recurrence_cdf(const LatticeRenewal& lr, double t, const Grid& xgrid) {
  require_step(lr, xgrid);
  require_horizon(lr, t);
  const double h = lr.grid.h;
  const DistributionSpec& F = lr.F;
  std::size_t K = static_cast<std::size_t>(std::floor(t / h + 1e-9));
  K = std::min(K, lr.grid.n);
  double r = t - static_cast<double>(K) * h;
  if (r < 1e-9 * h) r = 0.0;
  const std::size_t L = xgrid.n;

  std::vector<double> S(K + L + 1);
  for (std::size_t i = 0; i < S.size(); ++i) S[i] = F.survival(r + static_cast<double>(i) * h);

  RecurrenceLaw law{t, GridFunction(xgrid), 0.0};
  auto& c = law.cdf.values;
  const double sbar_t = F.survival(t);
  for (std::size_t l = 0; l <= L; ++l) c[l] = sbar_t - F.survival(t + xgrid.x(l));

  const auto& u = lr.phi.density;
  if (K >= 1) {
    for (std::size_t j = 0; j <= K; ++j) {
      const double coef = trapezoid_weight(j, K, h) * u[j];
      const double* Sj = S.data() + (K - j);
      const double base = Sj[0];
      for (std::size_t l = 0; l <= L; ++l) c[l] += coef * (base - Sj[l]);
    }
  }
  if (r > 0.0) {
    const double uK = u[K];
    const double ut = K < lr.grid.n ? uK + (u[K + 1] - uK) * (r / h) : uK;
    for (std::size_t l = 0; l <= L; ++l) {
      const double gK = S[0] - S[l];
      const double gt = 1.0 - F.survival(xgrid.x(l));
      c[l] += 0.5 * r * (uK * gK + ut * gt);
    }
  }
  law.tail_mass = 1.0 - c.back();
  return law;
}

RecurrenceLaw forward_recurrence_cdf(const DistributionSpec& F, double t, const Grid& xgrid) {
  return forward_recurrence_cdf(lattice_for(F, t, xgrid.h), t, xgrid);
}

double forward_recurrence_density(const LatticeRenewal& lr, double t, double x) {
  const DistributionSpec& F = lr.F;
  const double h = lr.grid.h;
  const auto& u = lr.phi.density;
  double p = F.grid_density(t + x);
  const double T = lr.grid.horizon();
  const double span = std::min(t, T);
  std::size_t K = static_cast<std::size_t>(std::floor(span / h + 1e-9));
  K = std::min(K, lr.grid.n);
  double r = span - static_cast<double>(K) * h;
  if (r < 1e-9 * h) r = 0.0;
  if (K >= 1) {
    double s = 0.0;
    for (std::size_t j = 0; j <= K; ++j)
      s += trapezoid_weight(j, K, h) * u[j] * F.grid_density(t + x - static_cast<double>(j) * h);
    p += s;
  }
  if (r > 0.0) {
    const double uK = u[K];
    const double ut = K < lr.grid.n ? uK + (u[K + 1] - uK) * (r / h) : uK;
    p += 0.5 * r * (uK * F.grid_density(t + x - static_cast<double>(K) * h) + ut * F.grid_density(x));
  }
  if (t > T) p += lr.m_h * (F.cdf(t + x - T) - F.cdf(x));
  return p;
}

namespace {

double tv_analytic(const LatticeRenewal& lr, double t, const Grid& xgrid) {
  const RecurrenceLaw law = forward_recurrence_cdf(lr, t, xgrid);
  const DistributionSpec& F = lr.F;
  const double h = xgrid.h;
  const std::size_t L = xgrid.n;
  const auto& c = law.cdf.values;

  GridMeasure bt(xgrid);
  for (std::size_t l = 0; l <= L; ++l) {
    double d;
    if (l == 0) d = (c[1] - c[0]) / h;
    else if (l == L) d = (c[L] - c[L - 1]) / h;
    else d = (c[l + 1] - c[l - 1]) / (2.0 * h);
    bt.density[l] = std::max(d, 0.0);
  }
  const double body = trapezoid(bt.density, h);
  const double tail = std::max(law.tail_mass, 0.0);
  if (body > 0.0)
    for (auto& d : bt.density) d *= (1.0 - tail) / body;
  bt.density[L] += tail / (0.5 * h);

  GridMeasure pi(xgrid);
  for (std::size_t l = 0; l <= L; ++l) pi.density[l] = F.stationary_delay_density(xgrid.x(l));
  const double pi_tail = F.tail_integral(xgrid.horizon()) * F.rate_m();
  const double pi_body = trapezoid(pi.density, h);
  for (auto& d : pi.density) d *= (1.0 - pi_tail) / pi_body;
  pi.density[L] += pi_tail / (0.5 * h);

  return tv_distance(bt, pi);
}

double tv_grid_consistent(const LatticeRenewal& lr, double t, const Grid& xgrid) {
  require_horizon(lr, t);
  const DistributionSpec& F = lr.F;
  const double h = lr.grid.h;
  const double mh = lr.m_h;
  const std::size_t K = lr.grid.nearest(t);
  const std::size_t L = xgrid.n;
  const auto& u = lr.phi.density;

  std::vector<double> S(K + L + 1);
  for (std::size_t i = 0; i < S.size(); ++i) S[i] = F.survival(static_cast<double>(i) * h);

  // D(x_l) = z_l(t) + sum_j w_j (u_j - m_h) z_l(t - u_j) - m_h (h/2 z_l(t) + h sum_{i>K} z_l(x_i)),
  // z_l(s) = Fbar(s) - Fbar(s + x_l).
  std::vector<double> D(L + 1, 0.0);
  for (std::size_t l = 0; l <= L; ++l) D[l] = (1.0 - 0.5 * h * mh) * (S[K] - S[K + l]);
  if (K >= 1) {
    for (std::size_t j = 0; j <= K; ++j) {
      const double coef = trapezoid_weight(j, K, h) * (u[j] - mh);
      const double* Sj = S.data() + (K - j);
      const double base = Sj[0];
      for (std::size_t l = 0; l <= L; ++l) D[l] += coef * (base - Sj[l]);
    }
  }
  double run = 0.0;
  for (std::size_t l = 1; l <= L; ++l) {
    run += S[K + l];
    D[l] -= mh * h * run;
  }

  double Dinf = (1.0 - 0.5 * h * mh) * S[K];
  if (K >= 1)
    for (std::size_t j = 0; j <= K; ++j) Dinf += trapezoid_weight(j, K, h) * (u[j] - mh) * S[K - j];
  Dinf -= mh * lattice_tail_sum(h, K, L, [&](double x) { return F.survival(x); },
                                [&](double x) { return F.tail_integral(x); });

  double tv = 0.0;
  for (std::size_t l = 0; l < L; ++l) tv += std::fabs(D[l + 1] - D[l]);
  tv += std::fabs(D[0]) + std::fabs(Dinf - D[L]);
  return tv;
}

}  // namespace

double tv_to_stationary(const LatticeRenewal& lr, double t, const Grid& xgrid, TvMode mode) {
  require_step(lr, xgrid);
  return mode == TvMode::analytic ? tv_analytic(lr, t, xgrid) : tv_grid_consistent(lr, t, xgrid);
}

double tv_to_stationary(const DistributionSpec& F, double t, const Grid& xgrid, TvMode mode) {
  return tv_to_stationary(lattice_for(F, t, xgrid.h), t, xgrid, mode);
}

}  // namespace renewal
