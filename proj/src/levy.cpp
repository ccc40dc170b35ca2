#include "frlab/levy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frlab/rng.hpp"

namespace frlab {

namespace {

double norm2(const std::vector<double>& z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return std::sqrt(s);
}

}  // namespace

LevyMeasureSpec::LevyMeasureSpec(int m, std::vector<Atom> a)
    : dim(m), atoms(std::move(a)) {
  if (m < 1) throw std::invalid_argument("levy measure: dim must be >= 1");
  for (const auto& at : atoms) {
    if (static_cast<int>(at.z.size()) != m)
      throw std::invalid_argument("levy measure: mark dimension mismatch");
    if (!(at.rate > 0.0))
      throw std::invalid_argument("levy measure: rates must be positive");
  }
}

LevyMeasureSpec LevyMeasureSpec::radial_tail(double c, double alpha_tail,
                                             double eps, double R, int n_bins) {
  if (!(eps > 0.0 && R > eps) || n_bins < 1)
    throw std::invalid_argument("radial_tail: need 0 < eps < R, n_bins >= 1");
  std::vector<Atom> atoms;
  const double le = std::log(eps), lr = std::log(R);
  for (int i = 0; i < n_bins; ++i) {
    const double a = std::exp(le + (lr - le) * i / n_bins);
    const double b = std::exp(le + (lr - le) * (i + 1) / n_bins);
    // density c*z^{-1-alpha} on [a,b]; mass and first moment in closed form.
    const double mass = c / alpha_tail * (std::pow(a, -alpha_tail) -
                                          std::pow(b, -alpha_tail));
    double first;
    if (std::abs(alpha_tail - 1.0) < 1e-12) {
      first = c * std::log(b / a);
    } else {
      first = c / (1.0 - alpha_tail) *
              (std::pow(b, 1.0 - alpha_tail) - std::pow(a, 1.0 - alpha_tail));
    }
    const double centroid = first / mass;
    atoms.push_back({{centroid}, mass});
    atoms.push_back({{-centroid}, mass});
  }
  return LevyMeasureSpec(1, std::move(atoms));
}

double LevyMeasureSpec::total_rate() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.rate;
  return s;
}

std::vector<double> LevyMeasureSpec::mean_jump() const {
  std::vector<double> m(dim, 0.0);
  for (const auto& a : atoms)
    for (int j = 0; j < dim; ++j) m[j] += a.z[j] * a.rate;
  return m;
}

double LevyMeasureSpec::max_mark_abs() const {
  double m = 0.0;
  for (const auto& a : atoms) m = std::max(m, norm2(a.z));
  return m;
}

double moment_constant(const LevyMeasureSpec& spec, double q) {
  if (q < 1.0) throw std::invalid_argument("moment_constant: q must be >= 1");
  if (spec.atoms.empty()) return 0.0;
  double s = 0.0;
  for (const auto& a : spec.atoms) s += std::pow(norm2(a.z), q) * a.rate;
  return std::pow(s, 1.0 / q);
}

MomentConstants moment_constants(const LevyMeasureSpec& spec, double p) {
  MomentConstants mc;
  mc.c2 = moment_constant(spec, 2.0);
  mc.cp = moment_constant(spec, p);
  mc.chat = std::max(mc.c2, mc.cp);
  return mc;
}

LevyTriplet LevyTriplet::pure_jump(LevyMeasureSpec spec) {
  LevyTriplet t;
  t.drift.assign(spec.dim, 0.0);
  t.gaussian.assign(static_cast<std::size_t>(spec.dim) * spec.dim, 0.0);
  t.jumps = std::move(spec);
  return t;
}

LevyTriplet LevyTriplet::wiener(int m) {
  LevyTriplet t;
  t.drift.assign(m, 0.0);
  t.gaussian.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) t.gaussian[static_cast<std::size_t>(i) * m + i] = 1.0;
  t.jumps.dim = m;
  return t;
}

LevyTriplet LevyTriplet::recentre() const {
  if (recentred) return *this;
  LevyTriplet t = *this;
  for (const auto& a : jumps.atoms) {
    if (norm2(a.z) >= 1.0)
      for (int j = 0; j < jumps.dim; ++j) t.drift[j] += a.z[j] * a.rate;
  }
  t.recentred = true;
  return t;
}

DriverPath sample_path(const LevyTriplet& triplet, double T, double dt,
                       std::uint64_t seed, std::uint64_t stream) {
  if (!(T > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("sample_path: need T > 0 and dt > 0");
  const double steps_real = T / dt;
  const int n_steps = static_cast<int>(std::llround(steps_real));
  if (std::abs(steps_real - n_steps) > 1e-9 * steps_real || n_steps < 1)
    throw std::invalid_argument("sample_path: dt must divide T");

  const int m = triplet.dim();
  std::mt19937_64 rng = substream(seed, stream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DriverPath path;
  path.horizon = T;
  path.dt = dt;
  path.seed = seed;
  path.stream = stream;
  path.wiener_increments.resize(n_steps);
  const double sq = std::sqrt(dt);
  for (int s = 0; s < n_steps; ++s) {
    std::vector<double> xi(m);
    for (int j = 0; j < m; ++j) xi[j] = gauss(rng);
    std::vector<double> inc(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        inc[i] += triplet.gaussian[static_cast<std::size_t>(i) * m + j] * xi[j];
    for (int i = 0; i < m; ++i) inc[i] *= sq;
    path.wiener_increments[s] = std::move(inc);
  }

  const double lambda = triplet.jumps.total_rate();
  if (lambda > 0.0) {
    std::poisson_distribution<int> pois(lambda * T);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n_jumps = pois(rng);
    std::vector<double> times(n_jumps);
    for (int i = 0; i < n_jumps; ++i)
      times[i] = T * (1.0 - unif(rng));  // in (0, T]
    std::sort(times.begin(), times.end());
    std::vector<double> cum;
    cum.reserve(triplet.jumps.atoms.size());
    double acc = 0.0;
    for (const auto& a : triplet.jumps.atoms) {
      acc += a.rate;
      cum.push_back(acc);
    }
    for (int i = 0; i < n_jumps; ++i) {
      const double u = unif(rng) * lambda;
      const std::size_t idx =
          std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
      const auto& atom =
          triplet.jumps.atoms[std::min(idx, triplet.jumps.atoms.size() - 1)];
      path.jump_events.push_back({times[i], atom.z});
    }
  }
  return path;
}

// Step index whose left endpoint precedes tau in (t_idx, t_{idx+1}].
static int left_step_index(double tau, double dt, int n_steps) {
  int idx = static_cast<int>(std::ceil(tau / dt - 1e-12)) - 1;
  return std::clamp(idx, 0, n_steps - 1);
}

double compensated_integral(const std::vector<std::vector<double>>& H,
                            const LevyMeasureSpec& spec,
                            const DriverPath& path) {
  if (static_cast<int>(H.size()) != path.steps())
    throw std::invalid_argument(
        "compensated_integral: integrand must cover every step of [0,T]");
  double jump_sum = 0.0;
  for (const auto& ev : path.jump_events) {
    const auto& h = H[left_step_index(ev.time, path.dt, path.steps())];
    for (int j = 0; j < spec.dim; ++j) jump_sum += h[j] * ev.mark[j];
  }
  const std::vector<double> mean = spec.mean_jump();
  double comp = 0.0;
  for (const auto& h : H)
    for (int j = 0; j < spec.dim; ++j) comp += h[j] * mean[j] * path.dt;
  return jump_sum - comp;
}

std::pair<DriverPath, std::optional<double>> truncate_big_jumps(
    const DriverPath& path, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("truncate_big_jumps: n must be > 0");
  DriverPath out = path;
  out.jump_events.clear();
  std::optional<double> first;
  for (const auto& ev : path.jump_events) {
    if (norm2(ev.mark) <= n) {
      out.jump_events.push_back(ev);
    } else if (!first || ev.time < *first) {
      first = ev.time;
    }
  }
  return {std::move(out), first};
}

}  // namespace frlab
