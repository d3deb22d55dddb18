#include "renewal/stats.hpp"

#include <algorithm>
#include <cmath>

#include "renewal/error.hpp"
#include "renewal/special_functions.hpp"

namespace renewal {

double ks_statistic(std::vector<double>& sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(double n_eff, double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0) / n_eff); }

double chi_square_statistic(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size()) throw Error(ErrorCode::invalid_parameter, "bin count mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double diff = observed[i] - expected[i];
    s += diff * diff / expected[i];
  }
  return s;
}

double chi_square_critical(double dof, double alpha) { return 2.0 * gamma_p_inv(0.5 * dof, 1.0 - alpha); }

double MeanEstimate::std_error() const { return n > 0 ? sd / std::sqrt(static_cast<double>(n)) : 0.0; }

MeanEstimate mean_sd(const std::vector<double>& v) {
  MeanEstimate e;
  e.n = v.size();
  if (v.empty()) return e;
  double s = 0.0;
  for (double x : v) s += x;
  e.mean = s / static_cast<double>(e.n);
  double ss = 0.0;
  for (double x : v) ss += (x - e.mean) * (x - e.mean);
  e.sd = e.n > 1 ? std::sqrt(ss / static_cast<double>(e.n - 1)) : 0.0;
  return e;
}

}  // namespace renewal
