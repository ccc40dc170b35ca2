#include "frlab/spectral.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "frlab/rng.hpp"

namespace frlab {

MultiplierSymbol MultiplierSymbol::frac_power(double beta) {
  MultiplierSymbol m;
  m.kind = Kind::FracPower;
  m.order = beta;
  return m;
}

MultiplierSymbol MultiplierSymbol::bessel(double mu) {
  MultiplierSymbol m;
  m.kind = Kind::Bessel;
  m.order = mu;
  return m;
}

MultiplierSymbol MultiplierSymbol::semigroup(double a_times_t, double alpha) {
  MultiplierSymbol m;
  m.kind = Kind::Semigroup;
  m.at = a_times_t;
  m.alpha = alpha;
  return m;
}

MultiplierSymbol MultiplierSymbol::eta(int i, double beta) {
  if (i < 1 || i > 4) throw std::invalid_argument("eta index must be in 1..4");
  if (!(beta > 0.0)) throw std::invalid_argument("eta requires beta > 0");
  MultiplierSymbol m;
  m.kind = Kind::Eta;
  m.order = beta;
  m.eta_index = i;
  return m;
}

double MultiplierSymbol::eval(double abs_xi) const {
  switch (kind) {
    case Kind::FracPower:
      return abs_xi == 0.0 ? 0.0 : -std::pow(abs_xi, order);
    case Kind::Bessel:
      return std::pow(1.0 + abs_xi * abs_xi, order / 2.0);
    case Kind::Semigroup:
      return std::exp(-at * (abs_xi == 0.0 ? 0.0 : std::pow(abs_xi, alpha)));
    case Kind::Eta: {
      const double b = order;
      const double pb = abs_xi == 0.0 ? 0.0 : std::pow(abs_xi, b);
      const double qb = std::pow(1.0 + abs_xi * abs_xi, b / 2.0);
      switch (eta_index) {
        case 1: return qb / (1.0 + pb);
        case 2: return (1.0 + pb) / qb;
        case 3: return pb / (1.0 + pb);
        case 4: return pb / qb;
      }
    }
  }
  return 0.0;
}

Field apply_symbol(const Field& u, const MultiplierSymbol& m) {
  if (!u.finite()) throw std::invalid_argument("apply_symbol: non-finite input");
  SpectralField s = forward_transform(u);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const double v = m.eval(u.grid.freq_abs(i));
    if (!std::isfinite(v))
      throw std::domain_error("apply_symbol: symbol not finite at a grid frequency");
    s.coeffs[i] *= v;
  }
  return inverse_transform(s);
}

Field frac_power(const Field& u, double beta) {
  if (beta < 0.0)
    throw std::invalid_argument(
        "frac_power: beta must be >= 0 (use bessel_potential for negative orders)");
  return apply_symbol(u, MultiplierSymbol::frac_power(beta));
}

Field bessel_potential(const Field& u, double mu) {
  return apply_symbol(u, MultiplierSymbol::bessel(mu));
}

Field semigroup_apply(const Field& u, double t, double a, double alpha) {
  if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
  if (!(a > 0.0)) throw std::invalid_argument("semigroup_apply: a must be > 0");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::invalid_argument("semigroup_apply: alpha must be in (0,2]");
  return apply_symbol(u, MultiplierSymbol::semigroup(a * t, alpha));
}

Field partial_derivative(const Field& u, int axis) {
  if (axis < 0 || axis >= u.grid.dim)
    throw std::invalid_argument("partial_derivative: axis out of range");
  SpectralField s = forward_transform(u);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (u.grid.is_nyquist(i, axis)) {
      s.coeffs[i] = 0.0;
    } else {
      s.coeffs[i] *= std::complex<double>(0.0, u.grid.freq_component(i, axis));
    }
  }
  return inverse_transform(s);
}

double lp_norm(const Field& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double cell = std::pow(u.grid.spacing(), u.grid.dim);
  double s = 0.0;
  for (double v : u.values) s += std::pow(std::abs(v), p);
  return std::pow(cell * s, 1.0 / p);
}

double sobolev_norm(const Field& u, double gamma, double p) {
  return lp_norm(bessel_potential(u, gamma), p);
}

FieldStack bessel_potential(const FieldStack& g, double mu) {
  std::vector<Field> comps;
  comps.reserve(g.components.size());
  for (const auto& c : g.components) comps.push_back(bessel_potential(c, mu));
  return FieldStack(std::move(comps));
}

double ell2_sobolev_norm(const FieldStack& g, double gamma, double p) {
  if (p < 2.0) throw std::invalid_argument("ell2_sobolev_norm: p must be >= 2");
  return lp_norm(bessel_potential(g, gamma).ell2_magnitude(), p);
}

Field random_band_limited(const Grid& g, std::uint64_t seed, int max_mode,
                          bool include_mean) {
  if (max_mode < 0) max_mode = g.modes_per_axis / 4;
  std::mt19937_64 rng = substream(seed, 0x62616e64u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField s(g);
  // Fill independent coefficients for "positive" half-space, mirror the rest.
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    std::size_t flat = i;
    std::vector<int> m(g.dim);
    for (int ax = g.dim - 1; ax >= 0; --ax) {
      m[ax] = g.freq_int(static_cast<int>(flat % g.modes_per_axis));
      flat /= g.modes_per_axis;
    }
    bool in_band = true;
    for (int ax = 0; ax < g.dim; ++ax)
      if (std::abs(m[ax]) > max_mode) in_band = false;
    if (!in_band) continue;
    bool zero_mode = true;
    for (int ax = 0; ax < g.dim; ++ax)
      if (m[ax] != 0) zero_mode = false;
    if (zero_mode) {
      s.coeffs[i] = include_mean ? gauss(rng) : 0.0;
      continue;
    }
    // Deterministic lexicographic rule: draw once for the representative of
    // each +/- pair, mirror with the conjugate.
    bool representative = false;
    for (int ax = 0; ax < g.dim; ++ax) {
      if (m[ax] > 0) { representative = true; break; }
      if (m[ax] < 0) { representative = false; break; }
    }
    if (!representative) continue;
    const std::complex<double> c(gauss(rng), gauss(rng));
    s.coeffs[i] = c;
    // Locate the mirrored index.
    std::size_t mirror = 0;
    for (int ax = 0; ax < g.dim; ++ax) {
      int mm = -m[ax];
      int idx = mm >= 0 ? mm : mm + g.modes_per_axis;
      mirror = mirror * g.modes_per_axis + static_cast<std::size_t>(idx);
    }
    s.coeffs[mirror] = std::conj(c);
  }
  return inverse_transform(s);
}

}  // namespace frlab
