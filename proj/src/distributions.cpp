#include "renewal/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "renewal/error.hpp"
#include "renewal/special_functions.hpp"

namespace renewal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::invalid_parameter, what);
}

double compute_mean(Kind kind, double p1, double p2) {
  switch (kind) {
    case Kind::exponential: return 1.0 / p1;
    case Kind::gamma: return p1 / p2;
    case Kind::uniform: return 0.5 * (p1 + p2);
    case Kind::shifted_pareto: return p2 / (p1 - 1.0);
  }
  return 0.0;
}

}  // namespace

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::exponential: return "exponential";
    case Kind::gamma: return "gamma";
    case Kind::uniform: return "uniform";
    case Kind::shifted_pareto: return "shifted-pareto";
  }
  return "unknown";
}

DistributionSpec::DistributionSpec(Kind kind, double p1, double p2)
    : kind_(kind), p1_(p1), p2_(p2), mean_(compute_mean(kind, p1, p2)) {}

DistributionSpec DistributionSpec::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential rate must be > 0");
  return DistributionSpec(Kind::exponential, rate, 0.0);
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
  require(std::isfinite(shape) && shape >= 1.0, "gamma shape must be >= 1");
  require(std::isfinite(rate) && rate > 0.0, "gamma rate must be > 0");
  return DistributionSpec(Kind::gamma, shape, rate);
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi > lo,
          "uniform needs 0 <= lo < hi");
  return DistributionSpec(Kind::uniform, lo, hi);
}

DistributionSpec DistributionSpec::shifted_pareto(double tail_index, double scale) {
  require(std::isfinite(tail_index) && tail_index > 1.0, "shifted-pareto tail index must be > 1");
  require(std::isfinite(scale) && scale > 0.0, "shifted-pareto scale must be > 0");
  return DistributionSpec(Kind::shifted_pareto, tail_index, scale);
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os << kind_name(kind_) << '(';
  switch (kind_) {
    case Kind::exponential: os << "rate=" << p1_; break;
    case Kind::gamma: os << "shape=" << p1_ << ", rate=" << p2_; break;
    case Kind::uniform: os << "lo=" << p1_ << ", hi=" << p2_; break;
    case Kind::shifted_pareto: os << "tail_index=" << p1_ << ", scale=" << p2_; break;
  }
  os << ')';
  return os.str();
}

double DistributionSpec::pdf(double x) const {
  if (x < 0.0) return 0.0;
  switch (kind_) {
    case Kind::exponential: return p1_ * std::exp(-p1_ * x);
    case Kind::gamma: {
      if (x == 0.0) return p1_ == 1.0 ? p2_ : 0.0;
      const double lp = p1_ * std::log(p2_) + (p1_ - 1.0) * std::log(x) - p2_ * x - std::lgamma(p1_);
      return std::exp(lp);
    }
    case Kind::uniform: return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case Kind::shifted_pareto: return p1_ * std::pow(p2_, p1_) * std::pow(p2_ + x, -p1_ - 1.0);
  }
  return 0.0;
}

double DistributionSpec::grid_density(double x) const {
  if (kind_ == Kind::uniform && ((x == p1_ && p1_ > 0.0) || x == p2_)) return 0.5 / (p2_ - p1_);
  return pdf(x);
}

double DistributionSpec::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::exponential: return -std::expm1(-p1_ * x);
    case Kind::gamma: return gamma_p(p1_, p2_ * x);
    case Kind::uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case Kind::shifted_pareto: return -std::expm1(-p1_ * std::log1p(x / p2_));
  }
  return 0.0;
}

double DistributionSpec::survival(double x) const {
  if (x <= 0.0) return 1.0;
  switch (kind_) {
    case Kind::exponential: return std::exp(-p1_ * x);
    case Kind::gamma: return gamma_q(p1_, p2_ * x);
    case Kind::uniform:
      if (x <= p1_) return 1.0;
      if (x >= p2_) return 0.0;
      return (p2_ - x) / (p2_ - p1_);
    case Kind::shifted_pareto: return std::exp(-p1_ * std::log1p(x / p2_));
  }
  return 0.0;
}

double DistributionSpec::hazard(double x) const {
  if (x < 0.0) return 0.0;
  switch (kind_) {
    case Kind::exponential: return p1_;
    case Kind::gamma: {
      if (x == 0.0) return pdf(0.0);
      const double lp = p1_ * std::log(p2_) + (p1_ - 1.0) * std::log(x) - p2_ * x - std::lgamma(p1_);
      return std::exp(lp - log_gamma_q(p1_, p2_ * x));
    }
    case Kind::uniform:
      if (x >= p2_) throw Error(ErrorCode::support_exhausted, "hazard beyond uniform support");
      return x < p1_ ? 0.0 : 1.0 / (p2_ - x);
    case Kind::shifted_pareto: return p1_ / (p2_ + x);
  }
  return 0.0;
}

double DistributionSpec::cumulative_hazard(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::exponential: return p1_ * x;
    case Kind::gamma: return -log_gamma_q(p1_, p2_ * x);
    case Kind::uniform:
      if (x >= p2_) throw Error(ErrorCode::support_exhausted, "cumulative hazard beyond uniform support");
      if (x <= p1_) return 0.0;
      return -std::log((p2_ - x) / (p2_ - p1_));
    case Kind::shifted_pareto: return p1_ * std::log1p(x / p2_);
  }
  return 0.0;
}

double DistributionSpec::quantile(double u) const {
  if (u <= 0.0) return kind_ == Kind::uniform ? p1_ : 0.0;
  if (u >= 1.0) return support_end();
  switch (kind_) {
    case Kind::exponential: return -std::log1p(-u) / p1_;
    case Kind::gamma: return gamma_p_inv(p1_, u) / p2_;
    case Kind::uniform: return p1_ + u * (p2_ - p1_);
    case Kind::shifted_pareto: return p2_ * std::expm1(-std::log1p(-u) / p1_);
  }
  return 0.0;
}

double DistributionSpec::support_end() const { return kind_ == Kind::uniform ? p2_ : kInf; }

MomentReport DistributionSpec::moment(double s) const {
  require(s >= 1.0, "moment order must be >= 1");
  MomentReport rep;
  rep.order = s;
  switch (kind_) {
    case Kind::exponential: rep.value = std::tgamma(s + 1.0) / std::pow(p1_, s); break;
    case Kind::gamma:
      rep.value = std::exp(std::lgamma(p1_ + s) - std::lgamma(p1_)) / std::pow(p2_, s);
      break;
    case Kind::uniform:
      rep.value = (std::pow(p2_, s + 1.0) - std::pow(p1_, s + 1.0)) / ((s + 1.0) * (p2_ - p1_));
      break;
    case Kind::shifted_pareto:
      if (s >= p1_) {
        rep.infinite = true;
        rep.value = kInf;
      } else {
        rep.value = std::pow(p2_, s) *
                    std::exp(std::lgamma(s + 1.0) + std::lgamma(p1_ - s) - std::lgamma(p1_));
      }
      break;
  }
  return rep;
}

double DistributionSpec::integrated_survival(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::exponential: return -std::expm1(-p1_ * x) / p1_;
    case Kind::gamma: {
      const double y = p2_ * x;
      return x * gamma_q(p1_, y) + (p1_ / p2_) * gamma_p(p1_ + 1.0, y);
    }
    case Kind::uniform:
      if (x <= p1_) return x;
      if (x >= p2_) return mean_;
      return mean_ - (p2_ - x) * (p2_ - x) / (2.0 * (p2_ - p1_));
    case Kind::shifted_pareto:
      return -p2_ / (p1_ - 1.0) * std::expm1(-(p1_ - 1.0) * std::log1p(x / p2_));
  }
  return 0.0;
}

double DistributionSpec::tail_integral(double x) const {
  if (x <= 0.0) return mean_ - std::max(x, 0.0);
  switch (kind_) {
    case Kind::exponential: return std::exp(-p1_ * x) / p1_;
    case Kind::gamma: {
      const double y = p2_ * x;
      return std::max(0.0, (p1_ / p2_) * gamma_q(p1_ + 1.0, y) - x * gamma_q(p1_, y));
    }
    case Kind::uniform:
      if (x <= p1_) return mean_ - x;
      if (x >= p2_) return 0.0;
      return (p2_ - x) * (p2_ - x) / (2.0 * (p2_ - p1_));
    case Kind::shifted_pareto:
      return p2_ / (p1_ - 1.0) * std::exp(-(p1_ - 1.0) * std::log1p(x / p2_));
  }
  return 0.0;
}

double DistributionSpec::stationary_delay_density(double x) const {
  if (x < 0.0) return 0.0;
  return survival(x) / mean_;
}

double DistributionSpec::stationary_delay_cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return 1.0 - tail_integral(x) / mean_;
}

double DistributionSpec::sample_stationary_delay(Rng& rng) const {
  const double u = rng.uniform();
  double lo = 0.0;
  double hi = mean_;
  while (stationary_delay_cdf(hi) < u) {
    lo = hi;
    hi *= 2.0;
    if (hi >= support_end()) {
      hi = support_end();
      break;
    }
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (stationary_delay_cdf(mid) < u) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace renewal
