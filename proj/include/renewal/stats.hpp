#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace renewal {

// sup |F_n - F| for a sample (sorted in place).
double ks_statistic(std::vector<double>& sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic critical value sqrt(-ln(alpha/2)/2) / sqrt(n_eff).
double ks_critical(double n_eff, double alpha = 0.05);

double chi_square_statistic(const std::vector<double>& observed, const std::vector<double>& expected);
double chi_square_critical(double dof, double alpha = 0.05);

struct MeanEstimate {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
  double std_error() const;
};

MeanEstimate mean_sd(const std::vector<double>& v);

}  // namespace renewal
