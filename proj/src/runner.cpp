#include "renewal/runner.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <thread>

#include "renewal/asymptotics.hpp"
#include "renewal/compensator.hpp"
#include "renewal/coupling.hpp"
#include "renewal/error.hpp"
#include "renewal/parallel.hpp"
#include "renewal/renewal_numerics.hpp"
#include "renewal/stats.hpp"
#include "renewal/stone.hpp"

namespace renewal {

using nlohmann::json;

int default_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve", "phi", "stone", "bt", "couple",
                                                 "compensator", "krt", "rootzen", "all"};
  return names;
}

json to_json(const CheckResult& r) {
  json j;
  if (r.id > 0) j["criterion"] = r.id;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["seconds"] = r.seconds;
  j["measurements"] = json::array();
  for (const auto& m : r.measurements) {
    json mj = {{"name", m.name}, {"value", m.value}, {"relation", m.relation}};
    if (m.relation != "info") {
      mj["bound"] = m.bound;
      mj["ok"] = m.ok;
    }
    j["measurements"].push_back(mj);
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

namespace {

namespace fs = std::filesystem;

struct Context {
  const ExperimentConfig& cfg;
  const RunOptions& opt;
  fs::path out;
  std::vector<CheckResult> checks;

  std::string file(const std::string& name) const { return (out / name).string(); }
  CheckResult& check(const std::string& name) {
    checks.emplace_back();
    checks.back().name = name;
    return checks.back();
  }
};

std::ofstream open_csv(const Context& ctx, const std::string& name) {
  std::ofstream os(ctx.file(name));
  if (!os) throw Error(ErrorCode::config, "cannot write " + ctx.file(name));
  os << std::setprecision(17);
  return os;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void run_solve(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const Grid g = ctx.cfg.grid();
  const GridFunction z = linear_forcing(F, g);
  const RenewalSolution sol = solve_renewal_equation(F, z);
  write_csv(sol.Z, ctx.file("Z.csv"));
  write_csv(z, ctx.file("z.csv"));
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::fabs(sol.Z[k] - F.rate_m() * g.x(k)));
  auto& c = ctx.check("linear-solution");
  c.expect("residual", sol.residual, "<=", 1e-8);
  c.expect("max|Z-mt|", err, "<=", 1000.0 * g.h * g.h);
}

void run_phi(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const Grid g = ctx.cfg.grid();
  const GridMeasure phi = renewal_measure(F, g);
  write_csv(phi, ctx.file("phi.csv"));
  const auto cum = phi.cumulative();
  {
    GridFunction c(g);
    c.values = cum;
    write_csv(c, ctx.file("phi_cumulative.csv"));
  }
  auto& c = ctx.check("renewal-function");
  c.expect("atom", phi.atom0, ">=", 1.0 - 1e-12);
  const double t = std::min(50.0 * F.mean(), g.horizon());
  const std::size_t k = g.nearest(t);
  c.expect("|Phi[0,t]/t - m|/m at t=50 mean", std::fabs(cum[k] / g.x(k) - F.rate_m()) / F.rate_m(), "<=", 0.05);
  const std::size_t nb = g.nearest(F.mean());
  double worst = -1.0;
  for (std::size_t i = nb; i < g.size(); ++i) worst = std::max(worst, cum[i] - cum[i - nb] - cum[nb]);
  c.expect("max over x of Phi(x-mean,x] - Phi[0,mean]", worst, "<=", 1e-9);
}

void run_stone(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const StoneDecomposition dec = stone_decompose(F, ctx.cfg.grid());
  write_csv(dec.phi1, ctx.file("phi1.csv"));
  write_csv(dec.Phi2, ctx.file("Phi2.csv"));
  {
    auto os = open_csv(ctx, "phi2_tail.csv");
    os << "x,tail\n";
    const Grid& g = dec.Phi2.grid;
    for (std::size_t k = 0; k <= g.n; k += std::max<std::size_t>(1, g.n / 400)) os << g.x(k) << ',' << phi2_tail(dec, g.x(k)) << '\n';
  }
  auto& c = ctx.check("stone-decomposition");
  const double norm = dec.component.n0 / dec.component.mass;
  c.info("n0", dec.component.n0);
  c.info("a", dec.component.a);
  c.info("b", dec.component.b);
  c.info("mass", dec.component.mass);
  c.info("truncation bound", phi2_truncation_bound(dec));
  c.expect("reconstruction", dec.reconstruction_error, "<=", 1e-6);
  c.info("factored-form deviation", dec.factored_form_error);
  c.info("|H|", dec.H_mass);
  c.info("|Phi2| in horizon", dec.phi2_mass);
  c.info("n0/mass", norm);
  c.expect("|phi1(T)-m|/m", std::fabs(dec.phi1.values.back() - F.rate_m()) / F.rate_m(), "<=", 0.02);
}

void run_bt(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const LatticeRenewal lr = build_lattice_renewal(F, ctx.cfg.grid());
  const Grid xg = recurrence_x_grid(F, lr.grid.h);
  const std::vector<double> ts = ctx.cfg.ts.empty() ? std::vector<double>{ctx.cfg.t} : ctx.cfg.ts;
  auto summary = open_csv(ctx, "bt_tv.csv");
  summary << "t,tv_analytic,tv_grid_consistent,tail_mass\n";
  auto& c = ctx.check("recurrence-law");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const RecurrenceLaw law = forward_recurrence_cdf(lr, ts[i], xg);
    write_csv(law.cdf, ctx.file("bt_cdf_" + std::to_string(i) + ".csv"));
    bool monotone = true;
    for (std::size_t l = 1; l < law.cdf.values.size(); ++l) monotone = monotone && law.cdf[l] >= law.cdf[l - 1] - 1e-12;
    const double a = tv_to_stationary(lr, ts[i], xg, TvMode::analytic);
    const double gc = tv_to_stationary(lr, ts[i], xg, TvMode::grid_consistent);
    summary << ts[i] << ',' << a << ',' << gc << ',' << law.tail_mass << '\n';
    c.require("cdf nondecreasing t=" + num(ts[i]), monotone);
    c.expect("tail mass t=" + num(ts[i]), std::fabs(law.tail_mass), "<=", 1e-4);
  }
}

void run_couple(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const LatticeRenewal lr = build_lattice_renewal(F, ctx.cfg.grid());
  const CouplingParams cp = find_common_component(lr);
  CouplingOptions co;
  co.keep_events = true;
  co.events_past_coupling = 5.0 * F.mean();
  const auto traces = parallel_map(static_cast<std::size_t>(ctx.cfg.n_traces), ctx.opt.threads, [&](std::size_t i) {
    Rng rng = Rng::derived(ctx.cfg.seed, i);
    return simulate_coupling(lr, cp, rng, co);
  });
  {
    auto os = open_csv(ctx, "traces.csv");
    os << "trace,k,eta,eta_hat,L,beta,beta_hat,raw_beta_hat,indicator,T\n";
    for (std::size_t i = 0; i < traces.size(); ++i)
      for (std::size_t k = 0; k < traces[i].steps.size(); ++k) {
        const auto& s = traces[i].steps[k];
        os << i << ',' << k << ',' << s.eta << ',' << s.eta_hat << ',' << s.L << ',' << s.beta << ',' << s.beta_hat
           << ',' << s.raw_beta_hat << ',' << s.indicator << ',' << s.T << '\n';
      }
  }
  {
    auto os = open_csv(ctx, "trace_summary.csv");
    os << "trace,sigma,coupling_time,final_uniform\n";
    for (std::size_t i = 0; i < traces.size(); ++i)
      os << i << ',' << traces[i].sigma << ',' << traces[i].coupling_time << ',' << traces[i].final_uniform << '\n';
  }
  const double p = cp.delta * cp.delta;
  const double n = static_cast<double>(traces.size());
  std::size_t bins = 0;
  while (n * p * std::pow(1.0 - p, static_cast<double>(bins)) >= 5.0) ++bins;
  std::vector<double> obs(bins + 1, 0.0), expct(bins + 1, 0.0);
  bool identical = true;
  for (const auto& tr : traces) {
    if (tr.capped) continue;
    obs[std::min<std::size_t>(static_cast<std::size_t>(tr.sigma), bins)] += 1.0;
    auto a = std::lower_bound(tr.events.begin(), tr.events.end(), tr.coupling_time);
    auto b = std::lower_bound(tr.events_hat.begin(), tr.events_hat.end(), tr.coupling_time);
    identical = identical && std::distance(a, tr.events.end()) == std::distance(b, tr.events_hat.end()) &&
                std::equal(a, tr.events.end(), b);
  }
  for (std::size_t m = 0; m < bins; ++m) expct[m] = n * p * std::pow(1.0 - p, static_cast<double>(m));
  expct[bins] = n * std::pow(1.0 - p, static_cast<double>(bins));
  {
    auto os = open_csv(ctx, "sigma_histogram.csv");
    os << "sigma,observed,expected\n";
    for (std::size_t m = 0; m <= bins; ++m) os << m << ',' << obs[m] << ',' << expct[m] << '\n';
  }
  auto& c = ctx.check("coupling");
  c.info("b", cp.b);
  c.info("d", cp.d);
  c.info("delta", cp.delta);
  if (bins >= 1) c.expect("sigma chi-square", chi_square_statistic(obs, expct), "<=", chi_square_critical(static_cast<double>(bins)));
  c.require("post-coupling events identical", identical);
  const Grid xg = recurrence_x_grid(F, lr.grid.h);
  auto os = open_csv(ctx, "coupling_tail.csv");
  os << "t,p_tail,ci_lo,ci_hi,tv\n";
  for (double t : ctx.cfg.ts) {
    const TailEstimate tail = coupling_tail(traces, t);
    const double tv = tv_to_stationary(lr, std::min(t, lr.grid.horizon()), xg, TvMode::analytic);
    os << t << ',' << tail.p << ',' << tail.lo << ',' << tail.hi << ',' << tv << '\n';
    const double sd = std::sqrt(tail.p * (1.0 - tail.p) / n);
    c.expect("2P(T>t)+3sd-tv t=" + num(t), 2.0 * tail.p + 3.0 * sd - tv, ">=", 0.0);
  }
  const MomentEstimate m = coupling_moment(traces, ctx.cfg.q);
  c.info("E[T^q]", m.mean);
  c.info("stderr E[T^q]", m.std_error);
}

void run_compensator(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const std::size_t n = static_cast<std::size_t>(ctx.cfg.n_paths);
  const double horizon = *std::max_element(ctx.cfg.ts.begin(), ctx.cfg.ts.end());
  const auto& ts = ctx.cfg.ts;
  struct PathStats {
    std::vector<double> m;
    std::vector<double> xi;
  };
  const auto stats = parallel_map(n, ctx.opt.threads, [&](std::size_t i) {
    Rng rng = Rng::derived(ctx.cfg.seed, i);
    const RenewalPath path = simulate_path(F, horizon, DelaySpec{}, rng);
    PathStats s;
    for (double t : ts) s.m.push_back(static_cast<double>(path.count(t)) - 1.0 - compensator_at(path, F, t));
    const auto xi = cycle_hazards(path, F).xi;
    s.xi.assign(xi.begin(), xi.begin() + std::min<std::size_t>(2, xi.size()));
    return s;
  });
  auto& c = ctx.check("compensator");
  auto os = open_csv(ctx, "martingale.csv");
  os << "t,mean,sd,n\n";
  for (std::size_t j = 0; j < ts.size(); ++j) {
    std::vector<double> v;
    for (const auto& s : stats) v.push_back(s.m[j]);
    const MeanEstimate e = mean_sd(v);
    os << ts[j] << ',' << e.mean << ',' << e.sd << ',' << e.n << '\n';
    c.expect("|mean(N-1-Lambda)| - 3 se t=" + num(ts[j]), std::fabs(e.mean) - 3.0 * e.std_error(), "<=", 0.0);
  }
  std::vector<double> xi;
  for (const auto& s : stats) xi.insert(xi.end(), s.xi.begin(), s.xi.end());
  const double nxi = static_cast<double>(xi.size());
  c.info("pooled cycles", nxi);
  if (!xi.empty())
    c.expect("xi KS vs Exp(1)", ks_statistic(xi, [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }), "<",
             ks_critical(nxi));

  auto sweep = open_csv(ctx, "sup_sweep.csv");
  sweep << "T,p_comp_over_eps,p_supB_over_eps,p_supA_over_eps\n";
  bool dominated = true;
  for (std::size_t ti = 0; ti < ctx.cfg.T_list.size(); ++ti) {
    const double T = ctx.cfg.T_list[ti];
    const auto res = parallel_map(n, ctx.opt.threads, [&](std::size_t i) {
      Rng rng = Rng::derived(ctx.cfg.seed + 1000003ULL * (ti + 1), i);
      const RenewalPath path = simulate_path(F, T, DelaySpec{}, rng);
      const double comp = scaled_compensator_sup(path, F, T, ctx.cfg.p);
      const RecurrenceSup rs = scaled_recurrence_sup(path, T, ctx.cfg.p_recurrence);
      const double cb = compensator_domination_bound(path, F, T, ctx.cfg.p);
      const double rb = recurrence_domination_bound(path, T, ctx.cfg.p_recurrence);
      const bool ok = comp <= cb * (1.0 + 1e-12) && rs.supA <= rb * (1.0 + 1e-12) && rs.supB <= rb * (1.0 + 1e-12);
      return std::array<double, 4>{comp, rs.supB, rs.supA, ok ? 1.0 : 0.0};
    });
    double pc = 0, pb = 0, pa = 0;
    for (const auto& r : res) {
      pc += r[0] > ctx.cfg.epsilon;
      pb += r[1] > ctx.cfg.epsilon;
      pa += r[2] > ctx.cfg.epsilon;
      dominated = dominated && r[3] == 1.0;
    }
    sweep << T << ',' << pc / n << ',' << pb / n << ',' << pa / n << '\n';
  }
  c.require("domination inequalities on every path", dominated);
}

void run_krt(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const LatticeRenewal lr = build_lattice_renewal(F, ctx.cfg.grid());
  auto& c = ctx.check("krt-rates");
  const double lo = *std::min_element(ctx.cfg.xs.begin(), ctx.cfg.xs.end());
  const double hi = *std::max_element(ctx.cfg.xs.begin(), ctx.cfg.xs.end());
  for (double rz : ctx.cfg.z_exponents) {
    const PowerLawForcing z{rz};
    const DecayCurve curve = krt_error_curve(lr, z, ctx.cfg.xs);
    const DecayCurve analytic = krt_error_curve_analytic(lr, z, ctx.cfg.xs);
    auto os = open_csv(ctx, "krt_r" + num(rz) + ".csv");
    os << "x,err,err_analytic\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i)
      os << curve.points[i].x << ',' << curve.points[i].err << ',' << analytic.points[i].err << '\n';
    const SlopeFit fit = fit_slope(curve, lo, hi, 1e-13);
    c.info("r=" + num(rz) + " r2", fit.r2);
    c.expect("r=" + num(rz) + " slope", fit.slope, "<=", std::max(1.0 - rz, -ctx.cfg.q) + 0.3);
  }
}

void run_rootzen(Context& ctx) {
  const auto& F = ctx.cfg.distribution;
  const MaxStatistic stat = ctx.cfg.statistic == "max-tau" ? MaxStatistic::max_tau : MaxStatistic::max_xi;
  auto os = open_csv(ctx, "rootzen.csv");
  os << "T,uniform_error\n";
  std::vector<double> errs;
  for (std::size_t i = 0; i < ctx.cfg.T_list.size(); ++i) {
    const double T = ctx.cfg.T_list[i];
    errs.push_back(rootzen_uniform_error(F, T, ctx.cfg.n_paths, stat, ctx.cfg.seed + 1000003ULL * i, ctx.opt.threads));
    os << T << ',' << errs.back() << '\n';
  }
  auto& c = ctx.check("cycle-maximum-limit");
  for (std::size_t i = 0; i < errs.size(); ++i) c.info("error T=" + num(ctx.cfg.T_list[i]), errs[i]);
  if (errs.size() >= 2) c.expect("error(last T) - error(first T)", errs.back() - errs.front(), "<", 0.0);
}

void run_all(Context& ctx) {
  CheckOptions co;
  co.seed = ctx.cfg.seed;
  co.threads = ctx.opt.threads;
  for (int id = 1; id <= kCriterionCount; ++id) ctx.checks.push_back(run_check(id, co));
}

}  // namespace

RunOutcome run_subcommand(const std::string& name, const ExperimentConfig& config, const RunOptions& options) {
  if (std::find(subcommands().begin(), subcommands().end(), name) == subcommands().end())
    throw Error(ErrorCode::config, "unknown subcommand '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(options.out_dir);
  Context ctx{config, options, fs::path(options.out_dir), {}};
  if (name == "solve") run_solve(ctx);
  else if (name == "phi") run_phi(ctx);
  else if (name == "stone") run_stone(ctx);
  else if (name == "bt") run_bt(ctx);
  else if (name == "couple") run_couple(ctx);
  else if (name == "compensator") run_compensator(ctx);
  else if (name == "krt") run_krt(ctx);
  else if (name == "rootzen") run_rootzen(ctx);
  else run_all(ctx);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& c : ctx.checks)
    if (c.id == 0) c.seconds = elapsed;

  RunOutcome out;
  out.checks = ctx.checks;
  out.report["subcommand"] = name;
  out.report["config"] = to_json(config);
  out.report["checks"] = json::array();
  for (const auto& c : ctx.checks) {
    out.report["checks"].push_back(to_json(c));
    out.all_passed = out.all_passed && c.passed;
  }
  out.report["passed"] = out.all_passed;
  out.report["wall_time_s"] = elapsed;
  std::ofstream os(ctx.file("report.json"));
  os << out.report.dump(2) << '\n';
  return out;
}

}  // namespace renewal
