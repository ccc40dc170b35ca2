#include "frlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "frlab/rng.hpp"

namespace frlab {

namespace {

// Exact per-step Duhamel weight: coefficients scaled by
// (1 - e^{-a dt |xi|^alpha}) / (a |xi|^alpha), with the xi=0 limit dt.
Field phi_apply(const Field& w, double a, double dt, double alpha) {
  SpectralField s = forward_transform(w);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const double ax = s.grid.freq_abs(i);
    if (ax == 0.0) {
      s.coeffs[i] *= dt;
    } else {
      const double lam = a * std::pow(ax, alpha);
      s.coeffs[i] *= -std::expm1(-lam * dt) / lam;
    }
  }
  return inverse_transform(s);
}

void axpy(Field& y, double c, const Field& x) {
  for (std::size_t i = 0; i < y.values.size(); ++i) y.values[i] += c * x.values[i];
}

}  // namespace

CoefficientSet CoefficientSet::scaled(double factor) const {
  CoefficientSet out = *this;
  auto scale_field = [&](std::optional<Field>& f) {
    if (f) *f *= factor;
  };
  scale_field(out.b);
  for (auto& ci : out.c) ci *= factor;
  scale_field(out.dcoef);
  auto scale_stack = [&](std::optional<FieldStack>& s) {
    if (s)
      for (auto& comp : s->components) comp *= factor;
  };
  scale_stack(out.eta);
  scale_stack(out.l);
  for (auto& s : out.sigma)
    for (auto& comp : s.components) comp *= factor;
  for (auto& s : out.nu)
    for (auto& comp : s.components) comp *= factor;
  return out;
}

int SolverConfig::steps() const {
  return static_cast<int>(std::llround(T / dt));
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("config: alpha must be in (0,2)");
  if (p < 2.0) throw std::invalid_argument("config: p must be >= 2");
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("config: need T > 0 and dt > 0");
  const double sr = T / dt;
  if (std::abs(sr - std::llround(sr)) > 1e-9 * sr)
    throw std::invalid_argument("config: dt must divide T");
  if (K < 1) throw std::invalid_argument("config: K must be >= 1");
  if (p == 2.0) {
    if (eps1 != 0.0)
      throw std::invalid_argument("config: eps1 must be 0 when p = 2");
  } else {
    const double threshold = alpha * (0.5 - 1.0 / p);
    if (!(eps1 > threshold)) {
      std::ostringstream os;
      os << "config: eps1 = " << eps1 << " must exceed alpha*(1/2 - 1/p) = "
         << threshold << " when p > 2";
      throw std::invalid_argument(os.str());
    }
  }
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("config: delta must be in (0,1)");
}

std::function<double(double)> sample_diffusivity(double delta, double T,
                                                 double dt, std::uint64_t seed,
                                                 std::uint64_t stream) {
  const int n = static_cast<int>(std::llround(T / dt)) + 1;
  const double mid = 0.5 * (delta + 1.0 / delta);
  const double half_width = 0.5 * (1.0 / delta - delta);
  const double theta = 1.0, sigma = 0.3 * half_width;
  std::mt19937_64 rng = substream(seed, stream ^ 0x61646966ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto vals = std::make_shared<std::vector<double>>(n);
  double x = 0.0;
  const double decay = std::exp(-theta * dt);
  const double step_sd = sigma * std::sqrt(-std::expm1(-2.0 * theta * dt) /
                                           (2.0 * theta));
  for (int i = 0; i < n; ++i) {
    const double a = std::clamp(mid + x, delta + 0.05 * half_width,
                                1.0 / delta - 0.05 * half_width);
    (*vals)[i] = a;
    x = x * decay + step_sd * gauss(rng);
  }
  return [vals, dt, n](double t) {
    int idx = static_cast<int>(std::llround(t / dt));
    return (*vals)[std::clamp(idx, 0, n - 1)];
  };
}

DriverSet sample_driver_set(const SolverConfig& cfg, const LevyTriplet& wiener,
                            const LevyTriplet& jump, std::uint64_t path_index) {
  DriverSet set;
  for (int k = 0; k < cfg.K; ++k) {
    const std::uint64_t base = path_index * 0x10000ULL + static_cast<std::uint64_t>(k);
    set.wiener.push_back(
        sample_path(wiener, cfg.T, cfg.dt, cfg.seed, base * 4 + 1));
    if (jump.jumps.total_rate() > 0.0) {
      LevyTriplet rc = jump.recentre();
      JumpDriver jd;
      jd.path = sample_path(rc, cfg.T, cfg.dt, cfg.seed, base * 4 + 2);
      jd.spec = rc.jumps;
      jd.recentred = true;
      set.jumps.push_back(std::move(jd));
    }
  }
  return set;
}

SolutionPath solve_linear(const LinearData& data, const DriverSet& drivers,
                          const SolverConfig& cfg) {
  cfg.validate();
  const int n_steps = cfg.steps();
  const double dt = cfg.dt;
  const double alpha = cfg.alpha;

  Field u = data.u0.values.empty() ? Field(cfg.grid) : data.u0;
  if (!(u.grid == cfg.grid))
    throw std::invalid_argument("solve: initial data grid mismatch");

  const bool have_h = static_cast<bool>(data.h) && !drivers.wiener.empty();
  const bool have_g = !data.g.empty() && !drivers.jumps.empty();
  const bool have_f = static_cast<bool>(data.f);

  for (const auto& w : drivers.wiener)
    if (w.steps() != n_steps)
      throw std::invalid_argument("solve: wiener path step mismatch");
  for (const auto& j : drivers.jumps) {
    if (!j.recentred)
      throw std::invalid_argument(
          "solve: jump drivers must be recentred (compensated) first");
    if (j.path.steps() != n_steps)
      throw std::invalid_argument("solve: jump path step mismatch");
  }

  SolutionPath out;
  out.times.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(u);

  // Per-driver cursors into the sorted event lists.
  std::vector<std::size_t> cursor(drivers.jumps.size(), 0);

  for (int n = 0; n < n_steps; ++n) {
    const double tn = n * dt;
    const double tnext = (n + 1) * dt;
    const double a = cfg.a ? cfg.a(tn) : 1.0;
    if (!(a > cfg.delta && a < 1.0 / cfg.delta))
      throw std::invalid_argument("solve: diffusivity left (delta, 1/delta)");

    Field v = u;
    if (have_h) {
      FieldStack hs = data.h(tn);
      if (hs.count() != static_cast<int>(drivers.wiener.size()))
        throw std::invalid_argument("solve: h component count != driver count");
      for (int k = 0; k < hs.count(); ++k)
        axpy(v, drivers.wiener[k].wiener_increments[n][0], hs.components[k]);
    }

    std::vector<FieldStack> gs;
    if (have_g) {
      gs.reserve(data.g.size());
      for (const auto& gj : data.g) gs.push_back(gj(tn));
    }

    // Events in (tn, tnext], merged across drivers, in time order.
    struct Ev {
      double time;
      int driver;
      const JumpEvent* ev;
    };
    std::vector<Ev> evs;
    for (std::size_t kd = 0; kd < drivers.jumps.size(); ++kd) {
      const auto& list = drivers.jumps[kd].path.jump_events;
      while (cursor[kd] < list.size() && list[cursor[kd]].time <= tnext + 1e-15) {
        if (list[cursor[kd]].time > tn + 1e-15)
          evs.push_back({list[cursor[kd]].time, static_cast<int>(kd),
                         &list[cursor[kd]]});
        ++cursor[kd];
      }
    }
    std::sort(evs.begin(), evs.end(),
              [](const Ev& x, const Ev& y) { return x.time < y.time; });

    if (evs.empty()) {
      v = semigroup_apply(v, dt, a, alpha);
    } else {
      double tcur = tn;
      for (const auto& e : evs) {
        if (e.time > tcur) v = semigroup_apply(v, e.time - tcur, a, alpha);
        tcur = e.time;
        if (have_g) {
          for (std::size_t j = 0; j < gs.size(); ++j)
            axpy(v, e.ev->mark[j], gs[j].components[e.driver]);
        }
      }
      if (tnext > tcur) v = semigroup_apply(v, tnext - tcur, a, alpha);
    }

    if (have_f || have_g) {
      Field w = have_f ? data.f(tn) : Field(cfg.grid);
      if (have_g) {
        for (std::size_t kd = 0; kd < drivers.jumps.size(); ++kd) {
          const std::vector<double> mean = drivers.jumps[kd].spec.mean_jump();
          for (std::size_t j = 0; j < gs.size(); ++j)
            if (mean[j] != 0.0)
              axpy(w, -mean[j], gs[j].components[kd]);
        }
      }
      v += phi_apply(w, a, dt, alpha);
    }

    u = std::move(v);
    out.times.push_back(tnext);
    out.states.push_back(u);
  }

  if (cfg.diagnostics) {
    out.norm_gamma.reserve(out.states.size());
    out.norm_gamma_alpha.reserve(out.states.size());
    for (const auto& s : out.states) {
      out.norm_gamma.push_back(sobolev_norm(s, cfg.gamma, cfg.p));
      out.norm_gamma_alpha.push_back(
          sobolev_norm(s, cfg.gamma + cfg.alpha, cfg.p));
    }
  }
  return out;
}

SolutionPath solve_deterministic(const Field& u0, const TimeField& f,
                                 const SolverConfig& cfg) {
  LinearData data;
  data.u0 = u0;
  data.f = f;
  return solve_linear(data, DriverSet{}, cfg);
}

SolutionPath stochastic_convolution_wiener(const TimeStack& g,
                                           const std::vector<DriverPath>& paths,
                                           const SolverConfig& cfg) {
  for (const auto& p : paths)
    if (!p.jump_events.empty())
      throw std::invalid_argument(
          "stochastic_convolution_wiener: paths contain jumps; use the jump variant");
  LinearData data;
  data.u0 = Field(cfg.grid);
  data.h = g;
  DriverSet set;
  set.wiener = paths;
  return solve_linear(data, set, cfg);
}

SolutionPath stochastic_convolution_jump(const std::vector<TimeStack>& g,
                                         const std::vector<JumpDriver>& paths,
                                         const SolverConfig& cfg) {
  for (const auto& p : paths)
    if (!p.recentred)
      throw std::invalid_argument(
          "stochastic_convolution_jump: recentre the triplet before solving");
  LinearData data;
  data.u0 = Field(cfg.grid);
  data.g = g;
  DriverSet set;
  set.jumps = paths;
  return solve_linear(data, set, cfg);
}

NonlinearityValue evaluate_nonlinearity(const Field& u, double t,
                                        const CoefficientSet& coeffs,
                                        const SolverConfig& cfg) {
  if (!(coeffs.beta1 < cfg.alpha))
    throw std::invalid_argument("coefficients: beta1 must be < alpha");
  if (!(coeffs.beta2 < cfg.alpha / 2.0))
    throw std::invalid_argument("coefficients: beta2 must be < alpha/2");
  for (double b3 : coeffs.beta3)
    if (!(b3 < cfg.alpha / 2.0 - cfg.eps1))
      throw std::invalid_argument("coefficients: beta3 must be < alpha/2 - eps1");

  NonlinearityValue out;
  out.f = Field(cfg.grid);
  if (coeffs.b) out.f += hadamard(*coeffs.b, frac_power(u, coeffs.beta1));
  if (cfg.alpha > 1.0) {
    for (std::size_t i = 0; i < coeffs.c.size(); ++i)
      out.f += hadamard(coeffs.c[i], partial_derivative(u, static_cast<int>(i)));
  }
  if (coeffs.dcoef) out.f += hadamard(*coeffs.dcoef, u);
  if (coeffs.f0) out.f += coeffs.f0(t);

  out.h = FieldStack(cfg.grid, cfg.K);
  std::optional<Field> du2;
  if (coeffs.eta) du2 = frac_power(u, coeffs.beta2);
  for (int k = 0; k < cfg.K; ++k) {
    if (coeffs.eta) out.h.components[k] += hadamard(coeffs.eta->components[k], *du2);
    if (coeffs.l) out.h.components[k] += hadamard(coeffs.l->components[k], u);
  }
  if (coeffs.h0) {
    FieldStack h0 = coeffs.h0(t);
    for (int k = 0; k < cfg.K; ++k) out.h.components[k] += h0.components[k];
  }

  const std::size_t m = std::max({coeffs.sigma.size(), coeffs.nu.size(),
                                  coeffs.g0.size()});
  for (std::size_t j = 0; j < m; ++j) {
    FieldStack gj(cfg.grid, cfg.K);
    if (j < coeffs.sigma.size()) {
      const Field du3 = frac_power(u, j < coeffs.beta3.size() ? coeffs.beta3[j] : 0.0);
      for (int k = 0; k < cfg.K; ++k)
        gj.components[k] += hadamard(coeffs.sigma[j].components[k], du3);
    }
    if (j < coeffs.nu.size())
      for (int k = 0; k < cfg.K; ++k)
        gj.components[k] += hadamard(coeffs.nu[j].components[k], u);
    if (j < coeffs.g0.size() && coeffs.g0[j]) {
      FieldStack g0 = coeffs.g0[j](t);
      for (int k = 0; k < cfg.K; ++k) gj.components[k] += g0.components[k];
    }
    out.g.push_back(std::move(gj));
  }
  return out;
}

DriverPath slice_path(const DriverPath& path, double t0, double t1) {
  DriverPath out;
  out.horizon = t1 - t0;
  out.dt = path.dt;
  out.seed = path.seed;
  out.stream = path.stream;
  const int i0 = static_cast<int>(std::llround(t0 / path.dt));
  const int i1 = static_cast<int>(std::llround(t1 / path.dt));
  out.wiener_increments.assign(path.wiener_increments.begin() + i0,
                               path.wiener_increments.begin() + i1);
  for (const auto& ev : path.jump_events) {
    if (ev.time > t0 + 1e-15 && ev.time <= t1 + 1e-15)
      out.jump_events.push_back({ev.time - t0, ev.mark});
  }
  return out;
}

double ensemble_h_norm(const std::vector<SolutionPath>& paths, double gamma_eff,
                       const SolverConfig& cfg) {
  double acc = 0.0;
  for (const auto& sp : paths) {
    double t_acc = 0.0;
    for (std::size_t n = 0; n + 1 < sp.states.size(); ++n)
      t_acc += cfg.dt * std::pow(sobolev_norm(sp.states[n], gamma_eff, cfg.p), cfg.p);
    acc += t_acc;
  }
  acc /= static_cast<double>(paths.size());
  return std::pow(acc, 1.0 / cfg.p);
}

namespace {

struct FrozenNonlinearity {
  // Lazily cache the nonlinearity evaluated along a previous iterate; the
  // stepper asks for f, h, g at the same t_n back to back.
  std::shared_ptr<const SolutionPath> prev;
  const CoefficientSet* coeffs;
  const SolverConfig* cfg;
  double t_offset;
  mutable int cached_idx = -1;
  mutable NonlinearityValue value;

  const NonlinearityValue& at(double t_rel) const {
    const int idx = static_cast<int>(std::llround(t_rel / cfg->dt));
    if (idx != cached_idx) {
      value = evaluate_nonlinearity(prev->states[idx], t_offset + t_rel, *coeffs,
                                    *cfg);
      cached_idx = idx;
    }
    return value;
  }
};

LinearData frozen_data(const Field& u0,
                       std::shared_ptr<FrozenNonlinearity> frozen,
                       std::size_t n_mark) {
  LinearData data;
  data.u0 = u0;
  data.f = [frozen](double t) { return frozen->at(t).f; };
  data.h = [frozen](double t) { return frozen->at(t).h; };
  for (std::size_t j = 0; j < n_mark; ++j)
    data.g.push_back([frozen, j](double t) { return frozen->at(t).g[j]; });
  return data;
}

LinearData affine_data(const Field& u0, const CoefficientSet& coeffs,
                       const SolverConfig& cfg, double t_offset,
                       std::size_t n_mark) {
  LinearData data;
  data.u0 = u0;
  if (coeffs.f0)
    data.f = [&coeffs, t_offset](double t) { return coeffs.f0(t_offset + t); };
  if (coeffs.h0)
    data.h = [&coeffs, t_offset](double t) { return coeffs.h0(t_offset + t); };
  for (std::size_t j = 0; j < n_mark; ++j) {
    if (j < coeffs.g0.size() && coeffs.g0[j]) {
      data.g.push_back([&coeffs, t_offset, j](double t) {
        return coeffs.g0[j](t_offset + t);
      });
    } else {
      const Grid grid = cfg.grid;
      const int K = cfg.K;
      data.g.push_back([grid, K](double) { return FieldStack(grid, K); });
    }
  }
  return data;
}

struct WindowFailure {
  std::vector<double> history;
};

// Picard iteration on one time window shared across the driver ensemble.
std::vector<SolutionPath> picard_window(
    const std::vector<Field>& u0s, const CoefficientSet& coeffs,
    const std::vector<DriverSet>& drivers, const SolverConfig& cfg,
    double t_offset, std::size_t n_mark, std::vector<double>& history,
    int& iterations) {
  const std::size_t M = drivers.size();
  std::vector<SolutionPath> prev(M);
  for (std::size_t i = 0; i < M; ++i)
    prev[i] = solve_linear(affine_data(u0s[i], coeffs, cfg, t_offset, n_mark),
                           drivers[i], cfg);

  for (int it = 1; it <= cfg.picard_max_iters; ++it) {
    std::vector<SolutionPath> next(M);
    double diff_acc = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      auto frozen = std::make_shared<FrozenNonlinearity>();
      auto prev_copy = std::make_shared<const SolutionPath>(prev[i]);
      frozen->prev = prev_copy;
      frozen->coeffs = &coeffs;
      frozen->cfg = &cfg;
      frozen->t_offset = t_offset;
      next[i] = solve_linear(frozen_data(u0s[i], frozen, n_mark), drivers[i], cfg);
      double t_acc = 0.0;
      for (std::size_t n = 0; n < next[i].states.size(); ++n) {
        Field d = next[i].states[n] - prev[i].states[n];
        t_acc += cfg.dt *
                 std::pow(sobolev_norm(d, cfg.gamma + cfg.alpha, cfg.p), cfg.p);
      }
      diff_acc += t_acc;
    }
    const double diff =
        std::pow(diff_acc / static_cast<double>(M), 1.0 / cfg.p);
    history.push_back(diff);
    iterations = it;
    if (diff < cfg.picard_tol) return next;
    const std::size_t h = history.size();
    if (h >= 3 && history[h - 1] > history[h - 2] &&
        history[h - 2] > history[h - 3])
      throw WindowFailure{history};
    prev = std::move(next);
  }
  throw WindowFailure{history};
}

}  // namespace

PicardResult picard_solve(const Field& u0, const CoefficientSet& coeffs,
                          const std::vector<DriverSet>& drivers,
                          const SolverConfig& cfg) {
  cfg.validate();
  if (drivers.empty())
    throw std::invalid_argument("picard_solve: need at least one driver set");
  std::size_t n_mark = std::max({coeffs.sigma.size(), coeffs.nu.size(),
                                 coeffs.g0.size()});
  const std::size_t M = drivers.size();

  std::vector<double> last_history;
  for (int n_sub = 1; n_sub <= 8; n_sub *= 2) {
    PicardResult result;
    result.subintervals = n_sub;
    try {
      std::vector<Field> u0s(M, u0);
      std::vector<SolutionPath> full(M);
      const double Tsub = cfg.T / n_sub;
      bool first = true;
      for (int s = 0; s < n_sub; ++s) {
        const double t0 = s * Tsub;
        SolverConfig sub_cfg = cfg;
        sub_cfg.T = Tsub;
        if (cfg.a) {
          auto a_full = cfg.a;
          sub_cfg.a = [a_full, t0](double t) { return a_full(t0 + t); };
        }
        std::vector<DriverSet> sub_drivers(M);
        for (std::size_t i = 0; i < M; ++i) {
          for (const auto& w : drivers[i].wiener)
            sub_drivers[i].wiener.push_back(slice_path(w, t0, t0 + Tsub));
          for (const auto& j : drivers[i].jumps) {
            JumpDriver jd = j;
            jd.path = slice_path(j.path, t0, t0 + Tsub);
            sub_drivers[i].jumps.push_back(std::move(jd));
          }
        }
        int iters = 0;
        std::vector<double> history;
        std::vector<SolutionPath> seg = picard_window(
            u0s, coeffs, sub_drivers, sub_cfg, t0, n_mark, history, iters);
        result.iterations = std::max(result.iterations, iters);
        for (double d : history) result.diff_history.push_back(d);
        for (std::size_t i = 0; i < M; ++i) {
          u0s[i] = seg[i].final_state();
          if (first) {
            full[i] = std::move(seg[i]);
          } else {
            for (std::size_t n = 1; n < seg[i].states.size(); ++n) {
              full[i].times.push_back(t0 + seg[i].times[n]);
              full[i].states.push_back(std::move(seg[i].states[n]));
              if (!seg[i].norm_gamma.empty()) {
                full[i].norm_gamma.push_back(seg[i].norm_gamma[n]);
                full[i].norm_gamma_alpha.push_back(seg[i].norm_gamma_alpha[n]);
              }
            }
          }
        }
        first = false;
      }
      for (auto& sp : full) sp.picard_history = result.diff_history;
      result.paths = std::move(full);
      return result;
    } catch (const WindowFailure& wf) {
      last_history = wf.history;
      continue;
    }
  }
  throw PicardDivergence("picard_solve: no contraction after subdividing to 8 windows",
                         last_history);
}

}  // namespace frlab
