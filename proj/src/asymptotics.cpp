#include "renewal/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "renewal/error.hpp"

namespace renewal {

double PowerLawForcing::operator()(double y) const { return std::pow(1.0 + y, -r); }
double PowerLawForcing::integral() const { return 1.0 / (r - 1.0); }
double PowerLawForcing::tail_integral(double x) const { return std::pow(1.0 + x, 1.0 - r) / (r - 1.0); }
GridFunction PowerLawForcing::on(const Grid& g) const {
  return tabulate(g, [&](double y) { return (*this)(y); });
}

DecayCurve krt_error_curve(const LatticeRenewal& lr, const PowerLawForcing& z, const std::vector<double>& xs) {
  const Grid& g = lr.grid;
  const double h = g.h;
  const double mh = lr.m_h;
  const auto& u = lr.phi.density;
  const GridFunction zg = z.on(g);

  // suffix[k] = h sum_{i > k} z_i over the infinite lattice
  std::vector<double> suffix(g.size());
  suffix[g.n] = lattice_tail_sum(h, g.n, 0, z, [&](double x) { return z.tail_integral(x); });
  for (std::size_t k = g.n; k-- > 0;) suffix[k] = suffix[k + 1] + h * zg[k + 1];

  DecayCurve curve;
  curve.label = "krt r=" + std::to_string(z.r);
  for (double x : xs) {
    if (x > g.horizon() * (1.0 + 1e-12)) throw Error(ErrorCode::horizon_exceeded, "x beyond horizon");
    const std::size_t k = g.nearest(x);
    double e = (1.0 - 0.5 * h * mh) * zg[k] - mh * suffix[k];
    if (k >= 1) {
      for (std::size_t j = 0; j <= k; ++j) {
        const double w = (j == 0 || j == k) ? 0.5 * h : h;
        e += w * (u[j] - mh) * zg[k - j];
      }
    }
    curve.points.push_back({g.x(k), std::fabs(e)});
  }
  return curve;
}

DecayCurve krt_error_curve_analytic(const LatticeRenewal& lr, const PowerLawForcing& z,
                                    const std::vector<double>& xs) {
  const Grid& g = lr.grid;
  const GridFunction conv = convolve_measure_function(lr.phi, z.on(g));
  const double limit = lr.F.rate_m() * z.integral();
  DecayCurve curve;
  curve.label = "krt-analytic r=" + std::to_string(z.r);
  for (double x : xs) {
    if (x > g.horizon() * (1.0 + 1e-12)) throw Error(ErrorCode::horizon_exceeded, "x beyond horizon");
    const std::size_t k = g.nearest(x);
    curve.points.push_back({g.x(k), std::fabs(conv[k] - limit)});
  }
  return curve;
}

DecayCurve tv_decay_curve(const LatticeRenewal& lr, const std::vector<double>& ts, TvMode mode) {
  const Grid xg = recurrence_x_grid(lr.F, lr.grid.h);
  DecayCurve curve;
  curve.label = "tv";
  for (double t : ts) curve.points.push_back({t, tv_to_stationary(lr, t, xg, mode)});
  return curve;
}

SlopeFit fit_slope(const DecayCurve& curve, double x_lo, double x_hi, double floor) {
  SlopeFit fit;
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  std::vector<double> lx, ly;
  for (const auto& p : curve.points) {
    if (p.x < x_lo * (1.0 - 1e-12) || p.x > x_hi * (1.0 + 1e-12)) continue;
    if (!(p.err > floor) || !(p.x > 0.0)) {
      ++fit.below_floor;
      continue;
    }
    lx.push_back(std::log(p.x));
    ly.push_back(std::log(p.err));
  }
  fit.used = lx.size();
  if (lx.size() < 5) throw Error(ErrorCode::insufficient_points, "fewer than 5 points above the floor");
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  return v;
}

}  // namespace renewal
