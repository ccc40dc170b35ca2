#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frlab/verify.hpp"

using namespace frlab;

namespace {

Field cosine_mode(const Grid& g, int k, double amp = 1.0) {
  Field u(g);
  for (int j = 0; j < g.modes_per_axis; ++j)
    u.values[j] = amp * std::cos(k * g.freq_unit() * g.node(j));
  return u;
}

// E[(g^2 N)^{p/2}] for N ~ Poisson(lambda*T), truncated at tail mass 1e-12.
double poisson_oracle(double g, double lambda, double T, double p) {
  const double mu = lambda * T;
  double logw = -mu;  // log of P(N=0)
  double acc = 0.0, mass = 0.0;
  for (int n = 0; mass < 1.0 - 1e-12 && n < 10000; ++n) {
    const double w = std::exp(logw);
    acc += w * std::pow(g * g * n, p / 2.0);
    mass += w;
    logw += std::log(mu) - std::log(n + 1.0);
  }
  return acc;
}

}  // namespace

TEST_CASE("littlewood-paley: zero data and single-mode closed form") {
  const Grid g(1, 32, 2.0 * M_PI);
  const double alpha = 1.5, T = 0.5, dt = 0.05;

  const InequalityReport zero =
      check_littlewood_paley(nullptr, alpha, 2.0, T, g, dt);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.ratio == 0.0);

  const int k = 3;
  const FieldStack gs{std::vector<Field>{cosine_mode(g, k)}};
  const InequalityReport rep = check_littlewood_paley(
      [gs](double) { return gs; }, alpha, 2.0, T, g, dt);

  // Per mode with midpoint lags:
  // lhs = pi * sum_n dt sum_{j<n} dt k^alpha e^{-2 k^alpha (t_n - t_j - dt/2)}.
  const double lam = std::pow(k, alpha);
  const int nt = static_cast<int>(std::llround(T / dt));
  double lhs = 0.0;
  for (int n = 1; n <= nt; ++n)
    for (int j = 0; j < n; ++j)
      lhs += M_PI * dt * dt * lam * std::exp(-2.0 * lam * (n - j - 0.5) * dt);
  CHECK(std::abs(rep.lhs - lhs) < 1e-6 * lhs);
  CHECK(std::abs(rep.rhs - M_PI * T) < 1e-10);
}

TEST_CASE("kunita check against the truncated poisson series") {
  const LevyMeasureSpec spec(1, {{{1.0}, 0.8}, {{-1.0}, 0.8}});
  const double T = 1.0, dt = 0.05, g0 = 0.7;
  const int nt = 20, M = 4000;
  const std::vector<std::vector<double>> g(1, std::vector<double>(nt, g0));

  for (double p : {2.0, 4.0}) {
    const InequalityReport rep = check_kunita(g, spec, p, T, dt, M, 77);
    const double oracle = poisson_oracle(g0, spec.total_rate(), T, p);
    CHECK(std::abs(rep.lhs - oracle) < 3.0 * rep.mc_std_error);
    CHECK(rep.rhs > 0.0);
    CHECK(std::isfinite(rep.ratio));
  }
  CHECK_THROWS_AS(check_kunita({{1.0}}, spec, 2.0, T, dt, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("linear estimate: zero data and deterministic reduction") {
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 0.5;
  cfg.dt = 0.05;
  cfg.grid = Grid(1, 32, 2.0 * M_PI);
  cfg.seed = 4;

  LinearData zero;
  const InequalityReport z =
      check_linear_estimate(zero, LevyTriplet::wiener(1), LevyTriplet{}, cfg, 5);
  CHECK(z.lhs == 0.0);
  CHECK(z.ratio == 0.0);

  // Deterministic-only data: every path identical, so zero std error.
  LinearData det;
  det.u0 = random_band_limited(cfg.grid, 6);
  const Field fv = 0.5 * random_band_limited(cfg.grid, 7);
  det.f = [fv](double) { return fv; };
  const InequalityReport rep =
      check_linear_estimate(det, LevyTriplet::wiener(1), LevyTriplet{}, cfg, 5);
  CHECK(rep.lhs > 0.0);
  CHECK(rep.rhs > 0.0);
  CHECK(std::isfinite(rep.ratio));
  CHECK(rep.mc_std_error < 1e-12 * rep.lhs);
}

TEST_CASE("sup estimate is finite and positive on noisy data") {
  SolverConfig cfg;
  cfg.alpha = 1.5;
  cfg.T = 0.5;
  cfg.dt = 0.05;
  cfg.grid = Grid(1, 32, 2.0 * M_PI);
  cfg.seed = 9;
  LinearData data;
  data.u0 = random_band_limited(cfg.grid, 10);
  const FieldStack hs{std::vector<Field>{0.3 * random_band_limited(cfg.grid, 11)}};
  data.h = [hs](double) { return hs; };
  const InequalityReport rep =
      check_sup_estimate(data, LevyTriplet::wiener(1), LevyTriplet{}, cfg, 20);
  CHECK(rep.lhs > 0.0);
  CHECK(rep.rhs > 0.0);
  CHECK(std::isfinite(rep.ratio));
}

TEST_CASE("interpolation: exact equality on a single mode at p=2") {
  const Grid g(1, 64, 2.0 * M_PI);
  const InequalityReport one =
      check_interpolation(cosine_mode(g, 5), 0.2, 1.6, 0.9, 2.0);
  CHECK(std::abs(one.ratio - 1.0) < 1e-10);

  Field two = cosine_mode(g, 2);
  two += cosine_mode(g, 7, 0.6);
  const InequalityReport rep = check_interpolation(two, 0.2, 1.6, 0.9, 2.0);
  CHECK(rep.ratio <= 1.2);
  CHECK_THROWS_AS(check_interpolation(two, 0.2, 1.6, 1.6, 2.0),
                  std::invalid_argument);
}

TEST_CASE("lemma32 check: closed form, threshold flagging") {
  const Grid g(1, 32, 2.0 * M_PI);
  const double alpha = 1.0, p = 4.0, T = 0.5, dt = 0.05;
  const int k = 2;
  const Field fv = cosine_mode(g, k);
  TimeField f = [fv](double) { return fv; };

  const InequalityReport rep = check_lemma32(f, alpha, p, 0.35, T, g, dt);
  CHECK(!rep.flagged);
  // lhs = (3pi/4) sum_n sum_{r<n} dt^2 (k^{1/2} e^{-(n-r) dt k})^4.
  const int nt = static_cast<int>(std::llround(T / dt));
  double lhs = 0.0;
  for (int n = 1; n <= nt; ++n)
    for (int r = 0; r < n; ++r) {
      const double a = std::sqrt(2.0) * std::exp(-(n - r) * dt * 2.0);
      lhs += 0.75 * M_PI * dt * dt * std::pow(a, 4.0);
    }
  CHECK(std::abs(rep.lhs - lhs) < 1e-6 * lhs);

  const InequalityReport low = check_lemma32(f, alpha, p, 0.10, T, g, dt);
  CHECK(low.flagged);
  CHECK(low.note.find("outside") != std::string::npos);
  CHECK_THROWS_AS(check_lemma32(f, alpha, 2.0, 0.35, T, g, dt),
                  std::invalid_argument);
}

TEST_CASE("multiplier bounds: eta3 contracts at p=2") {
  const Grid g(1, 64, 2.0 * M_PI);
  const InequalityReport rep = check_multiplier_bounds(3, 1.5, 2.0, g, 6, 2);
  CHECK(rep.lhs <= 1.0 + 1e-10);
  CHECK(rep.lhs > 0.0);
}

TEST_CASE("pointwise multiplier: constant equality, bump contraction") {
  const Grid g(1, 64, 2.0 * M_PI);
  const Field h = random_band_limited(g, 3);
  Field c(g);
  for (double& v : c.values) v = -2.0;
  const InequalityReport eq = check_pointwise_multiplier(c, h, 4.0);
  CHECK(std::abs(eq.ratio - 1.0) < 1e-12);
  CHECK(eq.pass);

  Field bump(g);
  for (int j = 0; j < 64; ++j)
    bump.values[j] = std::exp(-std::pow(g.node(j) - M_PI, 2.0));
  const InequalityReport lt = check_pointwise_multiplier(bump, h, 4.0);
  CHECK(lt.ratio < 1.0);
  CHECK(lt.pass);

  const InequalityReport zero = check_pointwise_multiplier(bump, Field(g), 4.0);
  CHECK(zero.ratio == 0.0);
}

TEST_CASE("report serialization carries all columns") {
  InequalityReport rep;
  rep.name = "demo";
  rep.lhs = 1.5;
  rep.rhs = 3.0;
  rep.ratio = 0.5;
  rep.mc_paths = 10;
  rep.config_digest = "abc";
  const std::string js = rep.to_json();
  CHECK(js.find("\"name\"") != std::string::npos);
  CHECK(js.find("\"ratio\"") != std::string::npos);
  CHECK(js.find("\"config_digest\"") != std::string::npos);
  const std::string row = report_csv_row(rep, 2);
  CHECK(row.find("demo,") == 0);
  CHECK(report_csv_header().find("refinement_level") != std::string::npos);

  // Digest is stable and parameter-sensitive.
  CHECK(ConfigDigest().add(1.0).add("x").hex() ==
        ConfigDigest().add(1.0).add("x").hex());
  CHECK(ConfigDigest().add(1.0).hex() != ConfigDigest().add(2.0).hex());
}
