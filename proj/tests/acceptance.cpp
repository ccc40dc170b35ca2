// Acceptance harness: one line per criterion, exit nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "frlab/experiment.hpp"
#include "frlab/integrator.hpp"
#include "frlab/verify.hpp"
#include "frlab/whitenoise.hpp"

using namespace frlab;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& what, bool ok, double secs) {
  std::printf("criterion %d: %s - %s (%.1fs)\n", id, ok ? "PASS" : "FAIL",
              what.c_str(), secs);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Field cosine_mode(const Grid& g, int k, double amp = 1.0) {
  Field u(g);
  for (int j = 0; j < g.modes_per_axis; ++j)
    u.values[j] = amp * std::cos(k * g.freq_unit() * g.node(j));
  return u;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// E[(g^2 N)^{p/2}], N ~ Poisson(lambda*T), truncated at tail mass 1e-12.
double poisson_oracle(double g, double lambda, double T, double p) {
  const double mu = lambda * T;
  double logw = -mu;
  double acc = 0.0, mass = 0.0;
  for (int n = 0; mass < 1.0 - 1e-12 && n < 10000; ++n) {
    const double w = std::exp(logw);
    acc += w * std::pow(g * g * n, p / 2.0);
    mass += w;
    logw += std::log(mu) - std::log(n + 1.0);
  }
  return acc;
}

void criterion_1_spectral_exactness() {
  Timer timer;
  bool ok = true;
  const Grid g(1, 256, 2.0 * M_PI);
  const double tol = 1e-10;

  {
    const Field u = cosine_mode(g, 7, 1.3);
    const Field v = frac_power(u, 1.2);
    const Field expect = cosine_mode(g, 7, -1.3 * std::pow(7.0, 1.2));
    ok = ok && max_abs_diff(v, expect) < tol * std::pow(7.0, 1.2);
  }
  {
    const Field u = cosine_mode(g, 9);
    const double lam = std::exp(-0.4 * std::pow(9.0, 1.5));
    ok = ok && max_abs_diff(semigroup_apply(u, 0.4, 1.0, 1.5),
                            cosine_mode(g, 9, lam)) < tol;
  }
  {
    const Field u = random_band_limited(g, 5);
    const Field two =
        semigroup_apply(semigroup_apply(u, 0.3, 0.8, 1.2), 0.6, 0.8, 1.2);
    ok = ok && max_abs_diff(two, semigroup_apply(u, 0.9, 0.8, 1.2)) < tol;
  }
  {
    const Field u = random_band_limited(g, 6);
    const double a = sobolev_norm(u, 0.7, 4.0);
    const double b = sobolev_norm(bessel_potential(u, 1.1), 0.7 - 1.1, 4.0);
    ok = ok && std::abs(a - b) < tol * std::max(1.0, a);
  }
  const double secs = timer.seconds();
  report(1, "spectral eigenfunction/composition/isometry exactness",
         ok && secs < 5.0, secs);
}

void criterion_2_ito_isometry() {
  Timer timer;
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 1.0;
  cfg.dt = 1e-2;
  cfg.grid = Grid(1, 64, 2.0 * M_PI);
  cfg.K = 2;
  cfg.seed = 2024;
  cfg.diagnostics = false;

  FieldStack gs(cfg.grid, 2);
  gs.components[0] = 0.5 * random_band_limited(cfg.grid, 81);
  gs.components[1] = 0.5 * random_band_limited(cfg.grid, 82);
  TimeStack g = [gs](double) { return gs; };

  const int M = 10000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < M; ++i) {
    std::vector<DriverPath> paths;
    for (int k = 0; k < 2; ++k)
      paths.push_back(sample_path(LevyTriplet::wiener(1), cfg.T, cfg.dt,
                                  cfg.seed, static_cast<std::uint64_t>(i) * 2 + k));
    const SolutionPath sp = stochastic_convolution_wiener(g, paths, cfg);
    const double n2 = std::pow(lp_norm(sp.final_state(), 2.0), 2.0);
    s += n2;
    s2 += n2 * n2;
  }
  const double mean = s / M;
  const double se = std::sqrt((s2 / M - mean * mean) / M);
  double exact = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < cfg.steps(); ++n) {
      const Field d = semigroup_apply(gs.components[k],
                                      (cfg.steps() - n) * cfg.dt, 1.0, cfg.alpha);
      exact += cfg.dt * std::pow(lp_norm(d, 2.0), 2.0);
    }
  const bool ok = std::abs(mean - exact) < 3.0 * se;
  const double secs = timer.seconds();
  report(2, "ito isometry of the wiener convolution at p=2 (10^4 paths)",
         ok && secs < 60.0, secs);
}

void criterion_3_kunita() {
  Timer timer;
  bool ok = true;
  const LevyMeasureSpec spec(1, {{{1.0}, 1.0}, {{-1.0}, 1.0}});
  const double T = 1.0, dt = 0.05, g0 = 0.8;
  const int nt = 20;
  const std::vector<std::vector<double>> g1(1, std::vector<double>(nt, g0));
  for (double p : {2.0, 4.0}) {
    const InequalityReport rep = check_kunita(g1, spec, p, T, dt, 10000, 31);
    const double oracle = poisson_oracle(g0, spec.total_rate(), T, p);
    ok = ok && std::abs(rep.lhs - oracle) < 3.0 * rep.mc_std_error;
  }
  const std::vector<std::vector<double>> g4(4, std::vector<double>(nt, g0));
  const std::vector<std::vector<double>> g8(8, std::vector<double>(nt, g0));
  const InequalityReport r4 = check_kunita(g4, spec, 4.0, T, dt, 4000, 32);
  const InequalityReport r8 = check_kunita(g8, spec, 4.0, T, dt, 4000, 33);
  ok = ok && r8.ratio < 2.0 * r4.ratio;
  const double secs = timer.seconds();
  report(3, "kunita moment bound vs poisson oracle; K-doubling stability",
         ok && secs < 120.0, secs);
}

void criterion_4_littlewood_paley() {
  Timer timer;
  bool ok = true;
  const Grid g(1, 32, 2.0 * M_PI);
  const double alpha = 1.5;

  {
    const int k = 3;
    const double T = 0.5, dt = 0.05;
    const FieldStack gs{std::vector<Field>{cosine_mode(g, k)}};
    const InequalityReport rep = check_littlewood_paley(
        [gs](double) { return gs; }, alpha, 2.0, T, g, dt);
    const double lam = std::pow(k, alpha);
    const int nt = static_cast<int>(std::llround(T / dt));
    double lhs = 0.0;
    for (int n = 1; n <= nt; ++n)
      for (int j = 0; j < n; ++j)
        lhs += M_PI * dt * dt * lam * std::exp(-2.0 * lam * (n - j - 0.5) * dt);
    ok = ok && std::abs(rep.lhs - lhs) < 1e-6 * lhs;
  }
  {
    FieldStack gs(g, 1);
    gs.components[0] = random_band_limited(g, 91);
    TimeStack gt = [gs](double) { return gs; };
    const double T = 0.4;
    std::vector<double> ratios;
    for (double dt : {0.04, 0.02, 0.01})
      ratios.push_back(
          check_littlewood_paley(gt, alpha, 4.0, T, g, dt).ratio);
    for (double r : ratios)
      ok = ok && std::abs(r / ratios[0] - 1.0) < 0.10;
  }
  const double secs = timer.seconds();
  report(4, "littlewood-paley closed form and dt-refinement stability",
         ok && secs < 120.0, secs);
}

void criterion_5_lemma32_threshold() {
  Timer timer;
  bool ok = true;
  const double alpha = 1.0, p = 4.0, T = 0.5, dt = 0.05;
  std::vector<double> ratios;
  for (int n : {32, 64}) {
    const Grid g(1, n, 2.0 * M_PI);
    const Field fv = random_band_limited(g, 51, 8);
    const InequalityReport rep = check_lemma32(
        [fv](double) { return fv; }, alpha, p, 0.35, T, g, dt);
    ok = ok && !rep.flagged;
    ratios.push_back(rep.ratio);
  }
  ok = ok && std::abs(ratios[1] / ratios[0] - 1.0) < 0.15;

  const Grid g(1, 32, 2.0 * M_PI);
  const Field fv = random_band_limited(g, 51, 8);
  const InequalityReport low =
      check_lemma32([fv](double) { return fv; }, alpha, p, 0.10, T, g, dt);
  ok = ok && low.flagged;
  const double secs = timer.seconds();
  report(5, "lemma32 ratio stable above the eps threshold; below flagged",
         ok, secs);
}

void criterion_6_linear_estimate() {
  Timer timer;
  bool ok = true;
  SolverConfig base;
  base.alpha = 1.5;
  base.T = 0.5;
  base.dt = 0.05;
  base.grid = Grid(1, 32, 2.0 * M_PI);
  base.K = 2;
  const int M = 40;

  struct Case {
    double p;
    double eps1;
    bool jumps;
  };
  const LevyMeasureSpec spec(1, {{{0.5}, 1.0}, {{-0.5}, 1.0}});
  for (const Case c : {Case{2.0, 0.0, false}, Case{4.0, 0.4, false},
                       Case{2.0, 0.0, true}}) {
    SolverConfig cfg = base;
    cfg.p = c.p;
    cfg.eps1 = c.eps1;
    std::vector<double> ratios;
    for (int draw = 0; draw < 5; ++draw) {
      cfg.seed = 100 + draw;
      LinearData data;
      data.u0 = 0.5 * random_band_limited(cfg.grid, cfg.seed + 11);
      const Field fv = 0.3 * random_band_limited(cfg.grid, cfg.seed + 12);
      data.f = [fv](double) { return fv; };
      if (!c.jumps) {
        FieldStack hs(cfg.grid, cfg.K);
        for (int k = 0; k < cfg.K; ++k)
          hs.components[k] =
              0.3 * random_band_limited(cfg.grid, cfg.seed + 20 + k);
        data.h = [hs](double) { return hs; };
      } else {
        FieldStack gs(cfg.grid, cfg.K);
        for (int k = 0; k < cfg.K; ++k)
          gs.components[k] =
              0.3 * random_band_limited(cfg.grid, cfg.seed + 40 + k);
        data.g = {[gs](double) { return gs; }};
      }
      const LevyTriplet jump =
          c.jumps ? LevyTriplet::pure_jump(spec) : LevyTriplet{};
      InequalityReport rep = check_linear_estimate(data, LevyTriplet::wiener(1),
                                                   jump, cfg, M);
      ratios.push_back(rep.ratio);
      if (draw == 0) {
        SolverConfig fine = cfg;
        fine.dt = cfg.dt / 2.0;
        const InequalityReport ref =
            check_linear_estimate(data, LevyTriplet::wiener(1), jump, fine, M);
        ok = ok && std::abs(ref.ratio / rep.ratio - 1.0) < 0.25;
      }
    }
    double mean = 0.0;
    for (double r : ratios) mean += r / ratios.size();
    for (double r : ratios) ok = ok && std::abs(r / mean - 1.0) < 0.25;
    ok = ok && std::isfinite(mean) && mean > 0.0;
  }
  const double secs = timer.seconds();
  report(6, "linear a-priori estimate ratio bounded/stable (p=2,4; jump p=2)",
         ok && secs < 600.0, secs);
}

double picard_fitted_ratio(double scale, SolverConfig cfg, int* iterations) {
  CoefficientSet coeffs;
  Field c(cfg.grid);
  for (double& v : c.values) v = scale;
  coeffs.b = c;
  coeffs.dcoef = c;
  coeffs.beta1 = 0.6;
  coeffs.beta2 = 0.3;
  FieldStack cs(cfg.grid, cfg.K);
  for (auto& comp : cs.components) comp = c;
  coeffs.eta = cs;
  coeffs.l = cs;
  const Field fv = cosine_mode(cfg.grid, 1, 0.4);
  coeffs.f0 = [fv](double) { return fv; };
  FieldStack hs(cfg.grid, cfg.K);
  hs.components[0] = cosine_mode(cfg.grid, 2, 0.4);
  coeffs.h0 = [hs](double) { return hs; };

  std::vector<DriverSet> drivers;
  for (int i = 0; i < 3; ++i)
    drivers.push_back(
        sample_driver_set(cfg, LevyTriplet::wiener(1), LevyTriplet{}, i));
  const Field u0 = 0.5 * random_band_limited(cfg.grid, 61);
  const PicardResult res = picard_solve(u0, coeffs, drivers, cfg);
  if (iterations) *iterations = res.iterations;
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < res.diff_history.size(); ++i) {
    if (res.diff_history[i] > 0.0 && res.diff_history[i - 1] > 0.0) {
      acc += std::log(res.diff_history[i] / res.diff_history[i - 1]);
      ++count;
    }
  }
  return count > 0 ? std::exp(acc / count) : 0.0;
}

void criterion_7_picard_contraction() {
  Timer timer;
  bool ok = true;
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 0.5;
  cfg.dt = 0.05;
  cfg.grid = Grid(1, 32, 2.0 * M_PI);
  cfg.K = 1;
  cfg.seed = 7;

  const double r_full = picard_fitted_ratio(0.2, cfg, nullptr);
  const double r_half = picard_fitted_ratio(0.1, cfg, nullptr);
  ok = ok && r_full > 0.0 && r_full < 0.9;
  ok = ok && r_half < r_full;

  // Zero nonlinearity: exactly one iteration.
  CoefficientSet affine;
  const FieldStack hs{std::vector<Field>{cosine_mode(cfg.grid, 2, 0.4)}};
  affine.h0 = [hs](double) { return hs; };
  const std::vector<DriverSet> drivers = {
      sample_driver_set(cfg, LevyTriplet::wiener(1), LevyTriplet{}, 0)};
  const PicardResult res =
      picard_solve(cosine_mode(cfg.grid, 1), affine, drivers, cfg);
  ok = ok && res.iterations == 1;

  const double secs = timer.seconds();
  report(7, "picard contraction: fitted ratio < 0.9, scale monotone, affine 1-step",
         ok, secs);
}

void criterion_8_time_change() {
  Timer timer;
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 1.0;
  cfg.grid = Grid(1, 32, 2.0 * M_PI);
  cfg.a = [](double t) { return 1.0 + 0.5 * std::sin(t); };
  const Field u0 = random_band_limited(cfg.grid, 71);
  const double I = cfg.T + 0.5 * (1.0 - std::cos(cfg.T));
  const Field exact = semigroup_apply(u0, I, 1.0, cfg.alpha);

  std::vector<double> dts = {0.02, 0.01, 0.005}, errs;
  for (double dt : dts) {
    cfg.dt = dt;
    const SolutionPath sp = solve_deterministic(u0, nullptr, cfg);
    errs.push_back(lp_norm(sp.final_state() - exact, 2.0));
  }
  const double slope = fitted_log_slope(dts, errs);
  const bool ok = std::abs(slope - 1.0) < 0.2;
  const double secs = timer.seconds();
  report(8, "time-change cross-check converges at first order in dt", ok, secs);
}

void criterion_9_lemma_l_last1() {
  Timer timer;
  WhiteNoiseConfig cfg;
  cfg.gamma = -0.6;
  cfg.alpha = 1.0;
  cfg.p = 2.0;
  cfg.r = 1.0;
  cfg.s = std::numeric_limits<double>::infinity();
  cfg.grid = Grid(1, 128, 2.0 * M_PI);

  // Rough data: a jump discontinuity keeps the basis truncation error
  // dominant through K_basis = 64.
  Field h0(cfg.grid);
  for (int j = 0; j < cfg.grid.modes_per_axis; ++j) {
    const double x = cfg.grid.node(j);
    h0.values[j] = (x < M_PI ? 1.0 : -0.6) + 0.2 * std::cos(2.0 * x);
  }
  Field xi0(cfg.grid);
  for (int j = 0; j < cfg.grid.modes_per_axis; ++j)
    xi0.values[j] = 1.0 + 0.3 * std::cos(cfg.grid.node(j));

  bool ok = true;
  double prev_gap = 2.0;
  for (int K : {16, 32, 64}) {
    cfg.K_basis = K;
    const InequalityReport rep = check_lemma_l_last1(h0, xi0, cfg);
    const double gap = std::abs(rep.ratio - 1.0);
    ok = ok && gap < prev_gap;
    ok = ok && rep.lhs <= rep.aux * (1.0 + 1e-8) + 1e-8;
    prev_gap = gap;
  }
  const double secs = timer.seconds();
  report(9, "basis truncation converges monotonically; hoelder bound at all levels",
         ok, secs);
}

void criterion_10_guard_rails() {
  Timer timer;
  bool ok = true;
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 0.5;
  cfg.dt = 0.05;
  cfg.grid = Grid(1, 32, 2.0 * M_PI);

  cfg.p = 2.0;
  cfg.eps1 = 0.0;
  try {
    cfg.validate();
  } catch (...) {
    ok = false;
  }
  cfg.p = 4.0;
  bool rejected = false;
  try {
    cfg.validate();
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  ok = ok && rejected;

  WhiteNoiseConfig wn;
  wn.gamma = -1.4;
  wn.alpha = 1.5;
  wn.p = 4.0;
  wn.r = 1.0;
  wn.grid = Grid(1, 32, 2.0 * M_PI);
  WhiteNoiseProblem prob;
  prob.u0 = Field(wn.grid);
  prob.xi = Field(wn.grid);
  prob.jump_drivers = true;
  prob.jump_spec = LevyMeasureSpec(1, {{{0.5}, 1.0}});
  SolverConfig scfg;
  scfg.T = 0.5;
  scfg.dt = 0.05;
  scfg.eps1 = 0.6;
  rejected = false;
  try {
    solve_white_noise(prob, wn, scfg, 1);
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  ok = ok && rejected;
  wn.p = 2.0;
  scfg.eps1 = 0.0;
  try {
    solve_white_noise(prob, wn, scfg, 1);
  } catch (...) {
    ok = false;
  }
  const double secs = timer.seconds();
  report(10, "config guards: eps1 rule by p; jump white noise limited to p=2",
         ok, secs);
}

}  // namespace

int main() {
  criterion_1_spectral_exactness();
  criterion_2_ito_isometry();
  criterion_3_kunita();
  criterion_4_littlewood_paley();
  criterion_5_lemma32_threshold();
  criterion_6_linear_estimate();
  criterion_7_picard_contraction();
  criterion_8_time_change();
  criterion_9_lemma_l_last1();
  criterion_10_guard_rails();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
