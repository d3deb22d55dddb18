#include "renewal/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renewal/error.hpp"

namespace renewal {
namespace {

constexpr int kMaxIter = 1000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// log of the series sum for P: returns log(sum) where P = exp(-x + a log x - lgamma(a)) * sum.
double log_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return std::log(sum);
}

// Modified Lentz evaluation of the continued fraction for Q.
double log_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::log(h);
}

double log_prefactor(double a, double x) { return -x + a * std::log(x) - std::lgamma(a); }

void check_args(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x))
    throw Error(ErrorCode::invalid_parameter, "incomplete gamma requires a > 0, x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return std::exp(log_prefactor(a, x) + log_series(a, x));
  return 1.0 - std::exp(log_prefactor(a, x) + log_continued_fraction(a, x));
}

double gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - std::exp(log_prefactor(a, x) + log_series(a, x));
  return std::exp(log_prefactor(a, x) + log_continued_fraction(a, x));
}

double log_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) return std::log1p(-std::exp(log_prefactor(a, x) + log_series(a, x)));
  return log_prefactor(a, x) + log_continued_fraction(a, x);
}

double gamma_p_inv(double a, double p) {
  if (!(a > 0.0) || p < 0.0 || p > 1.0)
    throw Error(ErrorCode::invalid_parameter, "gamma_p_inv requires a > 0 and p in [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  // Wilson-Hilferty start.
  double x;
  {
    const double t = std::sqrt(-2.0 * std::log(p < 0.5 ? p : 1.0 - p));
    double z = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
    if (p < 0.5) z = -z;
    const double c = 1.0 / (9.0 * a);
    x = a * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
    if (!(x > 0.0)) x = std::pow(p * std::tgamma(a + 1.0), 1.0 / a);
    if (!(x > 0.0)) x = 1e-10;
  }

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  const double lg = std::lgamma(a);
  for (int it = 0; it < 200; ++it) {
    const double diff = (p < 0.5) ? gamma_p(a, x) - p : (1.0 - p) - gamma_q(a, x);
    if (diff > 0.0) hi = x; else lo = x;
    if (diff == 0.0) break;
    const double dens = std::exp(-x + (a - 1.0) * std::log(x) - lg);
    double next = (dens > 0.0) ? x - diff / dens : x;
    if (!(next > lo && next < hi)) {
      next = std::isinf(hi) ? 2.0 * x + 1.0 : 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) <= 1e-15 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace renewal
