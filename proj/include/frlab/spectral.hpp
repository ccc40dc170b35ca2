#pragma once

#include <cstdint>
#include <functional>

#include "frlab/field.hpp"

namespace frlab {

// Diagonal Fourier multipliers used throughout: fractional powers of the
// Laplacian, Bessel potentials, the alpha-stable semigroup, and the four
// auxiliary symbols
//   eta1(xi) = (1+|xi|^2)^{b/2} / (1+|xi|^b)
//   eta2     = 1/eta1
//   eta3(xi) = |xi|^b / (1+|xi|^b)
//   eta4(xi) = |xi|^b / (1+|xi|^2)^{b/2}
// All symbols are real, even functions of xi, so they map real fields to
// real fields.
struct MultiplierSymbol {
  enum class Kind { FracPower, Bessel, Semigroup, Eta };

  Kind kind = Kind::Bessel;
  double order = 0.0;   // beta for FracPower/Eta, mu for Bessel
  double at = 0.0;      // a*t for Semigroup
  double alpha = 2.0;   // alpha for Semigroup
  int eta_index = 1;    // 1..4 for Eta

  static MultiplierSymbol frac_power(double beta);
  static MultiplierSymbol bessel(double mu);
  static MultiplierSymbol semigroup(double a_times_t, double alpha);
  static MultiplierSymbol eta(int i, double beta);

  // Evaluate at |xi|. |0|^beta = 0 by convention for beta > 0.
  double eval(double abs_xi) const;
};

// Multiply Fourier coefficients by m(|xi|) and transform back.
Field apply_symbol(const Field& u, const MultiplierSymbol& m);

// Delta^{beta/2}: symbol -|xi|^beta. Requires beta >= 0; negative orders go
// through bessel_potential.
Field frac_power(const Field& u, double beta);

// (1-Delta)^{mu/2}: symbol (1+|xi|^2)^{mu/2}, any real mu.
Field bessel_potential(const Field& u, double mu);

// T_t with generator a*Delta^{alpha/2}: symbol exp(-a t |xi|^alpha).
Field semigroup_apply(const Field& u, double t, double a, double alpha);

// Spectral partial derivative along one axis (Nyquist mode zeroed).
Field partial_derivative(const Field& u, int axis);

// ||(1-Delta)^{gamma/2} u||_p with rectangle-rule quadrature over the nodes.
double sobolev_norm(const Field& u, double gamma, double p);

// Plain L_p quadrature norm.
double lp_norm(const Field& u, double p);

// ell_2-valued Sobolev norm: Bessel transform componentwise, pointwise ell_2
// magnitude, then the L_p quadrature norm.
double ell2_sobolev_norm(const FieldStack& g, double gamma, double p);

FieldStack bessel_potential(const FieldStack& g, double mu);

// Random real field with i.i.d. Gaussian Fourier coefficients supported on
// |freq ints| <= max_mode (default N/4), zero mean mode excluded optionally.
Field random_band_limited(const Grid& g, std::uint64_t seed, int max_mode = -1,
                          bool include_mean = true);

}  // namespace frlab
