#include "frlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

namespace frlab {

namespace {

double cell_volume(const Grid& g) {
  double c = 1.0;
  for (int i = 0; i < g.dim; ++i) c *= g.spacing();
  return c;
}

double safe_ratio(double lhs, double rhs) {
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

int left_index(double tau, double dt, int n_steps) {
  int idx = static_cast<int>(std::ceil(tau / dt - 1e-12)) - 1;
  return std::clamp(idx, 0, n_steps - 1);
}

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

MeanSE mean_se(const std::vector<double>& x) {
  MeanSE out;
  const double n = static_cast<double>(x.size());
  for (double v : x) out.mean += v;
  out.mean /= n;
  if (x.size() > 1) {
    double s2 = 0.0;
    for (double v : x) s2 += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(s2 / (n - 1.0) / n);
  }
  return out;
}

// Discrete-in-time L_p data norms on the dt lattice (left endpoints).
double time_field_norm(const TimeField& f, double gamma, double p, double T,
                       double dt) {
  if (!f) return 0.0;
  const int nt = static_cast<int>(std::llround(T / dt));
  double acc = 0.0;
  for (int n = 0; n < nt; ++n)
    acc += dt * std::pow(sobolev_norm(f(n * dt), gamma, p), p);
  return std::pow(acc, 1.0 / p);
}

double time_stack_norm(const TimeStack& g, double gamma, double p, double T,
                       double dt) {
  if (!g) return 0.0;
  const int nt = static_cast<int>(std::llround(T / dt));
  double acc = 0.0;
  for (int n = 0; n < nt; ++n)
    acc += dt * std::pow(ell2_sobolev_norm(g(n * dt), gamma, p), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

ConfigDigest& ConfigDigest::add(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) {
    h_ ^= (bits >> (8 * i)) & 0xffULL;
    h_ *= 0x100000001b3ULL;
  }
  return *this;
}

ConfigDigest& ConfigDigest::add(const std::string& s) {
  for (unsigned char c : s) {
    h_ ^= c;
    h_ *= 0x100000001b3ULL;
  }
  return *this;
}

std::string ConfigDigest::hex() const {
  std::ostringstream os;
  os << std::hex << h_;
  return os.str();
}

std::string InequalityReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["ratio"] = ratio;
  j["mc_paths"] = mc_paths;
  j["mc_std_error"] = mc_std_error;
  j["config_digest"] = config_digest;
  j["refinement_series"] = refinement_series;
  j["aux"] = aux;
  j["pass"] = pass;
  j["flagged"] = flagged;
  j["note"] = note;
  return j.dump(2);
}

std::string report_csv_header() {
  return "name,lhs,rhs,ratio,mc_std_error,refinement_level,pass";
}

std::string report_csv_row(const InequalityReport& r, int refinement_level) {
  std::ostringstream os;
  os.precision(17);
  os << r.name << ',' << r.lhs << ',' << r.rhs << ',' << r.ratio << ','
     << r.mc_std_error << ',' << refinement_level << ','
     << (r.pass ? "true" : "false");
  return os.str();
}

InequalityReport check_littlewood_paley(const TimeStack& g, double alpha,
                                        double p, double T, const Grid& grid,
                                        double dt) {
  if (p < 2.0) throw std::invalid_argument("littlewood_paley: p must be >= 2");
  InequalityReport rep;
  rep.name = "littlewood_paley";
  rep.config_digest =
      ConfigDigest().add(rep.name).add(alpha).add(p).add(T).add(dt).hex();
  const int nt = static_cast<int>(std::llround(T / dt));
  if (!g) return rep;

  const double cell = cell_volume(grid);
  std::vector<std::vector<SpectralField>> ghat(nt);
  std::vector<FieldStack> gval(nt);
  for (int j = 0; j < nt; ++j) {
    gval[j] = g(j * dt);
    for (const auto& comp : gval[j].components)
      ghat[j].push_back(forward_transform(comp));
  }

  double lhs = 0.0;
  for (int n = 1; n <= nt; ++n) {
    const double tn = n * dt;
    Field square(grid);
    for (int j = 0; j < n; ++j) {
      // Midpoint lag: the left endpoint loses first-order accuracy in
      // lambda*dt for the stiff modes.
      const double lag = tn - (j + 0.5) * dt;
      for (const auto& gh : ghat[j]) {
        SpectralField s = gh;
        for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
          const double ax = s.grid.freq_abs(idx);
          const double sym = (ax == 0.0 ? 0.0 : std::pow(ax, alpha / 2.0)) *
                             std::exp(-lag * std::pow(ax, alpha));
          s.coeffs[idx] *= sym;
        }
        Field v = inverse_transform(s);
        for (std::size_t idx = 0; idx < v.values.size(); ++idx)
          square.values[idx] += dt * v.values[idx] * v.values[idx];
      }
    }
    for (double sq : square.values) lhs += dt * cell * std::pow(sq, p / 2.0);
  }

  double rhs = 0.0;
  for (int j = 0; j < nt; ++j) {
    const Field mag = gval[j].ell2_magnitude();
    for (double v : mag.values) rhs += dt * cell * std::pow(std::abs(v), p);
  }

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.ratio = safe_ratio(lhs, rhs);
  return rep;
}

InequalityReport check_kunita(const std::vector<std::vector<double>>& g,
                              const LevyMeasureSpec& spec, double p, double T,
                              double dt, int mc_paths, std::uint64_t seed) {
  if (p < 2.0) throw std::invalid_argument("kunita: p must be >= 2");
  const int K = static_cast<int>(g.size());
  const int nt = static_cast<int>(std::llround(T / dt));
  for (const auto& gk : g)
    if (static_cast<int>(gk.size()) != nt)
      throw std::invalid_argument("kunita: integrand must cover every step");

  InequalityReport rep;
  rep.name = "kunita";
  rep.config_digest = ConfigDigest()
                          .add(rep.name)
                          .add(p)
                          .add(T)
                          .add(dt)
                          .add(static_cast<double>(K))
                          .add(static_cast<double>(mc_paths))
                          .add(static_cast<double>(seed))
                          .hex();

  const LevyTriplet triplet = LevyTriplet::pure_jump(spec);
  std::vector<double> samples(mc_paths);
  for (int i = 0; i < mc_paths; ++i) {
    double q = 0.0;
    for (int k = 0; k < K; ++k) {
      const DriverPath path = sample_path(
          triplet, T, dt, seed,
          (static_cast<std::uint64_t>(i) * 0x9e37ULL + k) * 2 + 1);
      for (const auto& ev : path.jump_events) {
        double z2 = 0.0;
        for (double z : ev.mark) z2 += z * z;
        const double gv = g[k][left_index(ev.time, dt, nt)];
        q += gv * gv * z2;
      }
    }
    samples[i] = std::pow(q, p / 2.0);
  }
  const MeanSE ms = mean_se(samples);

  double quad = 0.0, pn = 0.0;
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < nt; ++n) {
      quad += dt * g[k][n] * g[k][n];
      pn += dt * std::pow(std::abs(g[k][n]), p);
    }

  rep.lhs = ms.mean;
  rep.mc_std_error = ms.se;
  rep.mc_paths = mc_paths;
  rep.rhs = std::pow(quad, p / 2.0) + pn;
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  return rep;
}

namespace {

// Shared Monte-Carlo loop for the two a-priori estimates: solve the linear
// equation over sampled driver sets and reduce the per-path norm functional.
template <typename Reduce>
MeanSE mc_linear(const LinearData& data, const LevyTriplet& wiener,
                 const LevyTriplet& jump, const SolverConfig& cfg,
                 int mc_paths, Reduce&& reduce) {
  std::vector<double> samples(mc_paths);
  for (int i = 0; i < mc_paths; ++i) {
    const DriverSet set = sample_driver_set(cfg, wiener, jump, i);
    const SolutionPath path = solve_linear(data, set, cfg);
    samples[i] = reduce(path);
  }
  return mean_se(samples);
}

double rhs_data_norms(const LinearData& data, const SolverConfig& cfg,
                      double order_f, double order_h, double order_g,
                      double order_u0, double power) {
  double nf = time_field_norm(data.f, order_f, cfg.p, cfg.T, cfg.dt);
  double nh = time_stack_norm(data.h, order_h, cfg.p, cfg.T, cfg.dt);
  double ng = 0.0;
  for (const auto& gj : data.g)
    ng += std::pow(time_stack_norm(gj, order_g, cfg.p, cfg.T, cfg.dt), power);
  double nu0 = data.u0.values.empty()
                   ? 0.0
                   : sobolev_norm(data.u0, order_u0, cfg.p);
  return std::pow(nf, power) + std::pow(nh, power) + ng + std::pow(nu0, power);
}

}  // namespace

InequalityReport check_linear_estimate(const LinearData& data,
                                       const LevyTriplet& wiener,
                                       const LevyTriplet& jump,
                                       const SolverConfig& cfg, int mc_paths) {
  cfg.validate();
  InequalityReport rep;
  rep.name = "linear_estimate";
  rep.config_digest = ConfigDigest()
                          .add(rep.name)
                          .add(cfg.alpha)
                          .add(cfg.gamma)
                          .add(cfg.p)
                          .add(cfg.T)
                          .add(cfg.dt)
                          .add(cfg.eps1)
                          .add(static_cast<double>(cfg.seed))
                          .add(static_cast<double>(mc_paths))
                          .hex();

  const MeanSE ms =
      mc_linear(data, wiener, jump, cfg, mc_paths, [&](const SolutionPath& sp) {
        double acc = 0.0;
        for (std::size_t n = 0; n + 1 < sp.norm_gamma_alpha.size(); ++n)
          acc += cfg.dt * std::pow(sp.norm_gamma_alpha[n], cfg.p);
        return acc;
      });
  rep.lhs = std::pow(ms.mean, 1.0 / cfg.p);
  rep.mc_std_error =
      ms.mean > 0.0
          ? ms.se / (cfg.p * std::pow(ms.mean, 1.0 - 1.0 / cfg.p))
          : 0.0;
  rep.mc_paths = mc_paths;

  // Data norms: f at gamma, h at gamma+alpha/2, g at gamma+alpha/2+eps1,
  // u0 at gamma+alpha-alpha/p. Summed without powers (p-th root applied).
  const double g2 = cfg.gamma;
  rep.rhs = std::pow(rhs_data_norms(data, cfg, g2, g2 + cfg.alpha / 2.0,
                                    g2 + cfg.alpha / 2.0 + cfg.eps1,
                                    g2 + cfg.alpha - cfg.alpha / cfg.p, 1.0),
                     1.0);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  return rep;
}

InequalityReport check_sup_estimate(const LinearData& data,
                                    const LevyTriplet& wiener,
                                    const LevyTriplet& jump,
                                    const SolverConfig& cfg, int mc_paths) {
  cfg.validate();
  InequalityReport rep;
  rep.name = "sup_estimate";
  rep.config_digest = ConfigDigest()
                          .add(rep.name)
                          .add(cfg.alpha)
                          .add(cfg.gamma)
                          .add(cfg.p)
                          .add(cfg.T)
                          .add(cfg.dt)
                          .add(static_cast<double>(cfg.seed))
                          .add(static_cast<double>(mc_paths))
                          .hex();

  const MeanSE ms =
      mc_linear(data, wiener, jump, cfg, mc_paths, [&](const SolutionPath& sp) {
        double sup = 0.0;
        for (double nv : sp.norm_gamma) sup = std::max(sup, std::pow(nv, cfg.p));
        return sup;
      });
  rep.lhs = ms.mean;
  rep.mc_std_error = ms.se;
  rep.mc_paths = mc_paths;

  // All data norms at order gamma, p-th powers summed.
  rep.rhs = rhs_data_norms(data, cfg, cfg.gamma, cfg.gamma, cfg.gamma,
                           cfg.gamma, cfg.p);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  return rep;
}

InequalityReport check_interpolation(const Field& u, double gamma, double alpha,
                                     double alpha1, double p) {
  if (!(alpha1 > 0.0 && alpha1 < alpha))
    throw std::invalid_argument("interpolation: need 0 < alpha1 < alpha");
  InequalityReport rep;
  rep.name = "interpolation";
  rep.config_digest =
      ConfigDigest().add(rep.name).add(gamma).add(alpha).add(alpha1).add(p).hex();
  const double theta = alpha1 / alpha;
  rep.lhs = sobolev_norm(u, gamma + alpha1, p);
  rep.rhs = std::pow(sobolev_norm(u, gamma + alpha, p), theta) *
            std::pow(sobolev_norm(u, gamma, p), 1.0 - theta);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  return rep;
}

InequalityReport check_lemma32(const TimeField& f, double alpha, double p,
                               double eps, double T, const Grid& grid,
                               double dt) {
  if (!(p > 2.0)) throw std::invalid_argument("lemma32: p must be > 2");
  InequalityReport rep;
  rep.name = "lemma32";
  rep.config_digest =
      ConfigDigest().add(rep.name).add(alpha).add(p).add(eps).add(T).add(dt).hex();
  const double threshold = alpha * (0.5 - 1.0 / p);
  if (!(eps > threshold)) {
    rep.flagged = true;
    rep.note = "outside-lemma regime: eps <= alpha*(1/2 - 1/p)";
  }
  const int nt = static_cast<int>(std::llround(T / dt));
  if (!f) return rep;

  const double cell = cell_volume(grid);
  std::vector<SpectralField> fhat(nt);
  std::vector<Field> fval(nt);
  for (int r = 0; r < nt; ++r) {
    fval[r] = f(r * dt);
    fhat[r] = forward_transform(fval[r]);
  }

  double lhs = 0.0;
  for (int n = 1; n <= nt; ++n) {
    const double sn = n * dt;
    for (int r = 0; r < n; ++r) {
      const double lag = sn - r * dt;
      SpectralField s = fhat[r];
      for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
        const double ax = s.grid.freq_abs(idx);
        const double sym = (ax == 0.0 ? 0.0 : std::pow(ax, alpha / 2.0)) *
                           std::exp(-lag * std::pow(ax, alpha));
        s.coeffs[idx] *= sym;
      }
      const Field v = inverse_transform(s);
      double sp = 0.0;
      for (double x : v.values) sp += cell * std::pow(std::abs(x), p);
      lhs += dt * dt * sp;
    }
  }

  double rhs = 0.0;
  for (int r = 0; r < nt; ++r)
    rhs += dt * std::pow(sobolev_norm(fval[r], eps, p), p);

  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.ratio = safe_ratio(lhs, rhs);
  return rep;
}

InequalityReport check_multiplier_bounds(int i, double beta, double p,
                                         const Grid& grid, int trials,
                                         std::uint64_t seed) {
  InequalityReport rep;
  rep.name = "multiplier_bounds";
  rep.config_digest = ConfigDigest()
                          .add(rep.name)
                          .add(static_cast<double>(i))
                          .add(beta)
                          .add(p)
                          .add(static_cast<double>(trials))
                          .add(static_cast<double>(seed))
                          .hex();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Field u = random_band_limited(grid, seed + t);
    const double denom = lp_norm(u, p);
    if (denom == 0.0) continue;
    const double num = lp_norm(apply_symbol(u, MultiplierSymbol::eta(i, beta)), p);
    worst = std::max(worst, num / denom);
  }
  rep.lhs = worst;
  rep.rhs = 1.0;
  rep.ratio = worst;
  return rep;
}

InequalityReport check_pointwise_multiplier(const Field& a, const Field& h,
                                            double p) {
  InequalityReport rep;
  rep.name = "pointwise_multiplier";
  rep.config_digest = ConfigDigest().add(rep.name).add(p).hex();
  double sup = 0.0;
  for (double v : a.values) sup = std::max(sup, std::abs(v));
  rep.lhs = lp_norm(hadamard(a, h), p);
  rep.rhs = sup * lp_norm(h, p);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.pass = rep.ratio <= 1.0 + 1e-12;
  return rep;
}

}  // namespace frlab
