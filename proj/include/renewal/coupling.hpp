#pragma once

#include <cstddef>
#include <vector>

#include "renewal/distributions.hpp"
#include "renewal/grid.hpp"
#include "renewal/renewal_numerics.hpp"
#include "renewal/rng.hpp"

namespace renewal {

struct MaximalCouplingDraw {
  double x = 0.0;
  double y = 0.0;
  bool coupled = false;
};

class MaximalCoupling {
 public:
  MaximalCoupling(const GridMeasure& p, const GridMeasure& q);
  double overlap() const { return overlap_; }  // ||p ^ q||
  MaximalCouplingDraw draw(Rng& rng) const;

 private:
  double overlap_;
  MeasureSampler common_;
  MeasureSampler rest_p_;
  MeasureSampler rest_q_;
};

MaximalCouplingDraw maximal_coupling_sample(const GridMeasure& p, const GridMeasure& q, Rng& rng);

struct CouplingParams {
  double b = 0.0;
  double d = 0.0;
  double delta = 0.0;
  double min_density = 0.0;  // smallest B_t density seen on the search lattice, window (0,b)
  double stationary_gap = 0.0;
};

CouplingParams find_common_component(const LatticeRenewal& lr);
CouplingParams find_common_component(const DistributionSpec& F, const Grid& grid);

// min over t in [d, d + 20 mean] (step t_step) and x in [0, b] of p_t(x) b / delta.
double verify_common_component(const LatticeRenewal& lr, const CouplingParams& params, double t_step,
                               std::size_t x_points = 101);

struct CouplingStep {
  double eta = 0.0;
  double eta_hat = 0.0;
  double L = 0.0;
  double beta = 0.0;      // beta_{k+1}
  double beta_hat = 0.0;  // beta-hat_{k+1} after the shared draw is applied
  double raw_beta_hat = 0.0;
  int indicator = 0;      // I_k
  double T = 0.0;         // T_k
};

struct CouplingTrace {
  std::vector<CouplingStep> steps;
  int sigma = -1;
  double coupling_time = 0.0;
  double final_uniform = 0.0;
  bool capped = false;
  double max_thinning_probability = 0.0;
  // Synthesized event times: the pure process S' and the stationary-then-switched S-hat'.
  std::vector<double> events;
  std::vector<double> events_hat;
};

struct CouplingOptions {
  int max_iterations = 10000;
  bool keep_events = false;
  double events_past_coupling = 0.0;  // extend synthesized sequences this far beyond the coupling time
};

CouplingTrace simulate_coupling(const LatticeRenewal& lr, const CouplingParams& params, Rng& rng,
                                const CouplingOptions& options = {});

struct TailEstimate {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

TailEstimate coupling_tail(const std::vector<CouplingTrace>& traces, double t);
TailEstimate coupling_tail(const std::vector<double>& coupling_times, double t);
MomentEstimate coupling_moment(const std::vector<CouplingTrace>& traces, double q);
MomentEstimate coupling_moment(const std::vector<double>& coupling_times, double q);

}  // namespace renewal
