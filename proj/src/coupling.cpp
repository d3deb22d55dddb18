#include "renewal/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "renewal/error.hpp"

namespace renewal {
namespace {

GridMeasure checked(const GridMeasure& m, const char* which) {
  if (std::fabs(m.mass() - 1.0) > 1e-6)
    throw Error(ErrorCode::not_normalized, std::string(which) + " is not a probability measure");
  return m;
}

GridMeasure positive_part(const GridMeasure& m) {
  GridMeasure out = m;
  out.atom0 = std::max(out.atom0, 0.0);
  for (auto& d : out.density) d = std::max(d, 0.0);
  return out;
}

}  // namespace

MaximalCoupling::MaximalCoupling(const GridMeasure& p, const GridMeasure& q)
    : overlap_(meet(checked(p, "p"), checked(q, "q")).mass()),
      common_(meet(p, q)),
      rest_p_(positive_part(subtract(p, meet(p, q)))),
      rest_q_(positive_part(subtract(q, meet(p, q)))) {}

MaximalCouplingDraw MaximalCoupling::draw(Rng& rng) const {
  MaximalCouplingDraw out;
  const double u = rng.uniform();
  if (u < overlap_) {
    out.x = out.y = common_.sample(rng);
    out.coupled = true;
  } else {
    out.x = rest_p_.sample(rng);
    out.y = rest_q_.sample(rng);
  }
  return out;
}

MaximalCouplingDraw maximal_coupling_sample(const GridMeasure& p, const GridMeasure& q, Rng& rng) {
  return MaximalCoupling(p, q).draw(rng);
}

CouplingParams find_common_component(const LatticeRenewal& lr) {
  const DistributionSpec& F = lr.F;
  const Grid& g = lr.grid;
  const double mean = F.mean();
  const double h = g.h;
  const std::size_t nb = g.nearest(mean);
  const std::size_t t_step = std::max<std::size_t>(1, g.nearest(0.25 * mean));
  const std::size_t t_first = std::max<std::size_t>(1, g.nearest(0.5 * mean));
  const std::size_t t_last = g.nearest(5.0 * mean) + static_cast<std::size_t>(std::llround(20.0 * mean / h));

  std::vector<std::size_t> ts;
  for (std::size_t t = t_first; t <= t_last; t += t_step) ts.push_back(t);

  // f on nodes, extended past the renewal horizon.
  std::vector<double> f(t_last + nb + 1);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = F.grid_density(static_cast<double>(k) * h);
  const auto& u = lr.phi.density;

  // dens[i][l] = B_t density at t = ts[i], x = l h
  std::vector<std::vector<double>> dens(ts.size(), std::vector<double>(nb + 1));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::size_t T = ts[i];
    const double t = static_cast<double>(T) * h;
    const std::size_t K = std::min(T, g.n);
    for (std::size_t l = 0; l <= nb; ++l) {
      double s = 0.0;
      for (std::size_t j = 0; j <= K; ++j) {
        const double w = (j == 0 || j == K) ? 0.5 * h : h;
        s += w * u[j] * f[T + l - j];
      }
      double p = f[T + l] + s;
      if (T > g.n) p += lr.m_h * (F.cdf(t + static_cast<double>(l) * h - g.horizon()) - F.cdf(static_cast<double>(l) * h));
      dens[i][l] = p;
    }
  }

  CouplingParams best;
  for (double df : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    const std::size_t D = g.nearest(df * mean);
    const std::size_t Dend = D + static_cast<std::size_t>(std::llround(20.0 * mean / h));
    for (double bf : {0.25, 0.5, 1.0}) {
      const std::size_t B = std::max<std::size_t>(1, g.nearest(bf * mean));
      const double b = static_cast<double>(B) * h;
      double lo = std::numeric_limits<double>::infinity();
      double dev_first = 0.0, dev_last = 0.0;
      std::vector<std::size_t> used;
      for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= D && ts[i] <= Dend) used.push_back(i);
      if (used.empty()) continue;
      const std::size_t quarter = std::max<std::size_t>(1, used.size() / 4);
      double pi_min = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l <= B; ++l) pi_min = std::min(pi_min, F.stationary_delay_density(static_cast<double>(l) * h));
      for (std::size_t n = 0; n < used.size(); ++n) {
        const auto& row = dens[used[n]];
        double dev = 0.0;
        for (std::size_t l = 0; l <= B; ++l) {
          lo = std::min(lo, row[l]);
          dev = std::max(dev, std::fabs(row[l] - F.stationary_delay_density(static_cast<double>(l) * h)));
        }
        if (n < quarter) dev_first = std::max(dev_first, dev);
        if (n + quarter >= used.size()) dev_last = std::max(dev_last, dev);
      }
      const double delta = 0.95 * b * lo;
      const bool stabilized = dev_last <= dev_first + 1e-12 && pi_min - 2.0 * dev_last >= delta / b;
      if (stabilized && delta > best.delta) {
        best.b = b;
        best.d = static_cast<double>(D) * h;
        best.delta = delta;
        best.min_density = lo;
        best.stationary_gap = dev_last;
      }
    }
  }
  if (best.delta < 0.01) throw Error(ErrorCode::no_common_component, "no common uniform component with delta >= 0.01");
  return best;
}

CouplingParams find_common_component(const DistributionSpec& F, const Grid& grid) {
  return find_common_component(build_lattice_renewal(F, grid));
}

double verify_common_component(const LatticeRenewal& lr, const CouplingParams& params, double t_step,
                               std::size_t x_points) {
  const double mean = lr.F.mean();
  double worst = std::numeric_limits<double>::infinity();
  for (double t = params.d; t <= params.d + 20.0 * mean + 1e-12; t += t_step) {
    for (std::size_t i = 0; i < x_points; ++i) {
      const double x = params.b * static_cast<double>(i) / static_cast<double>(x_points - 1);
      worst = std::min(worst, forward_recurrence_density(lr, t, x) * params.b / params.delta);
    }
  }
  return worst;
}

namespace {

// Runs a renewal process from an epoch at `from` until it passes `until`.
// Returns the first epoch beyond `until`; intermediate epochs go to `out`.
double advance(const DistributionSpec& F, double from, double until, Rng& rng, std::vector<double>* out) {
  double pos = from;
  while (pos <= until) {
    pos += F.sample(rng);
    if (out) out->push_back(pos);
  }
  return pos;
}

}  // namespace

CouplingTrace simulate_coupling(const LatticeRenewal& lr, const CouplingParams& params, Rng& rng,
                                const CouplingOptions& options) {
  const DistributionSpec& F = lr.F;
  const double b = params.b;
  const double d = params.d;
  const double delta2 = params.delta * params.delta;

  CouplingTrace tr;
  double eta = 0.0;
  double eta_hat = F.sample_stationary_delay(rng);
  std::vector<double>* ev = options.keep_events ? &tr.events : nullptr;
  std::vector<double>* ev_hat = options.keep_events ? &tr.events_hat : nullptr;
  if (ev) {
    ev->push_back(0.0);
    ev_hat->push_back(eta_hat);
  }

  for (int k = 0; k < options.max_iterations; ++k) {
    CouplingStep st;
    st.eta = eta;
    st.eta_hat = eta_hat;
    st.L = std::max(eta, eta_hat) + d;
    const double next = advance(F, eta, st.L, rng, ev);
    const double next_hat = advance(F, eta_hat, st.L, rng, ev_hat);
    st.beta = next - st.L;
    st.raw_beta_hat = next_hat - st.L;
    st.beta_hat = st.raw_beta_hat;

    const double accept_u = rng.uniform();
    if (st.beta < b && st.raw_beta_hat < b) {
      const double p = forward_recurrence_density(lr, st.L - eta, st.beta);
      const double p_hat = forward_recurrence_density(lr, st.L - eta_hat, st.raw_beta_hat);
      const double prob = delta2 / (b * b * p * p_hat);
      tr.max_thinning_probability = std::max(tr.max_thinning_probability, prob);
      if (prob > 1.0 + 1e-9)
        throw Error(ErrorCode::thinning_probability_exceeds_one, "common component bound violated");
      st.indicator = accept_u < prob ? 1 : 0;
    }

    if (st.indicator == 1) {
      tr.sigma = k;
      tr.final_uniform = st.beta;
      st.beta_hat = st.beta;
      tr.coupling_time = st.L + st.beta;
      tr.steps.push_back(st);
      if (ev_hat) ev_hat->back() = tr.coupling_time;
      break;
    }
    tr.steps.push_back(st);
    eta = next;
    eta_hat = next_hat;
  }

  if (tr.sigma < 0) {
    tr.capped = true;
    tr.coupling_time = std::numeric_limits<double>::infinity();
    return tr;
  }

  for (auto& st : tr.steps) st.T = st.L + tr.final_uniform;

  if (options.keep_events) {
    const double stop = tr.coupling_time + options.events_past_coupling;
    double pos = tr.coupling_time;
    while (pos <= stop) {
      pos += F.sample(rng);
      tr.events.push_back(pos);
      tr.events_hat.push_back(pos);
    }
  }
  return tr;
}

TailEstimate coupling_tail(const std::vector<double>& times, double t) {
  TailEstimate est;
  est.n = times.size();
  if (est.n == 0) return est;
  std::size_t above = 0;
  for (double x : times) above += x > t ? 1 : 0;
  const double n = static_cast<double>(est.n);
  const double p = static_cast<double>(above) / n;
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  est.p = p;
  est.lo = std::max(0.0, center - half);
  est.hi = std::min(1.0, center + half);
  return est;
}

TailEstimate coupling_tail(const std::vector<CouplingTrace>& traces, double t) {
  std::vector<double> times;
  times.reserve(traces.size());
  for (const auto& tr : traces) times.push_back(tr.coupling_time);
  return coupling_tail(times, t);
}

MomentEstimate coupling_moment(const std::vector<double>& times, double q) {
  if (!(q > 0.0)) throw Error(ErrorCode::invalid_parameter, "moment order must be > 0");
  MomentEstimate est;
  est.n = times.size();
  if (est.n == 0) return est;
  double s = 0.0, s2 = 0.0;
  for (double x : times) {
    const double v = std::pow(x, q);
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(est.n);
  est.mean = s / n;
  const double var = est.n > 1 ? std::max(0.0, (s2 - n * est.mean * est.mean) / (n - 1.0)) : 0.0;
  est.std_error = std::sqrt(var / n);
  return est;
}

MomentEstimate coupling_moment(const std::vector<CouplingTrace>& traces, double q) {
  std::vector<double> times;
  times.reserve(traces.size());
  for (const auto& tr : traces) times.push_back(tr.coupling_time);
  return coupling_moment(times, q);
}

}  // namespace renewal
