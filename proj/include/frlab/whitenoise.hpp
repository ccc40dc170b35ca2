#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "frlab/verify.hpp"

namespace frlab {

// d=1 space-time white-noise machinery: cylindrical driver expanded over an
// orthonormal trig basis, the R_gamma kernel, and the shaped-noise solver.
struct WhiteNoiseConfig {
  double gamma = -0.6;
  double alpha = 1.0;
  double p = 2.0;
  double s = std::numeric_limits<double>::infinity();
  double r = 1.0;
  int K_basis = 16;
  Grid grid;  // must have dim == 1
};

struct ExponentCheck {
  bool valid = true;
  std::string message;  // names every violated constraint
};

// Constraints: 0 > gamma + alpha/2 > -1; p >= 2r >= 2;
// 1 <= r < (2 gamma + alpha + 2)^{-1}; 1/s + 1/r = 1.
ExponentCheck validate_exponents(const WhiteNoiseConfig& cfg);

// Orthonormal basis of L_2[0,L): k=1 the constant, then cos/sin pairs.
// Discrete orthonormality h * sum eta^j eta^k = delta_jk holds exactly below
// the Nyquist frequency.
Field basis_function(const Grid& g, int k);

// R_gamma(x) = |x|^{-(q+1)} int_0^inf t^{-(q+3)/2} e^{-t x^2 - 1/(4t)} dt
// with q = gamma + alpha/2 in (-1,0); doubly-exponential quadrature after
// t = e^u. Throws on x = 0 (singular point).
double r_gamma_kernel(double x, double gamma, double alpha);

// Lattice kernel for the torus convolution: cell averages of R_gamma
// (leading power law integrated exactly against the frozen smooth factor),
// periodized over a window of +-window_periods*L, normalized by the constant
// c fitted so that c*R_gamma acts like (1-Delta)^{q/2} on the first mode.
struct KernelTable {
  Grid grid;
  double gamma = 0.0;
  double alpha = 0.0;
  int window_periods = 8;
  std::vector<double> values;  // includes the fitted c
  double c_fit = 1.0;
  double fit_residual = 0.0;  // max relative symbol mismatch, modes <= N/4

  // Discrete torus L_q norm of the lattice kernel.
  double lattice_norm(double q) const;
};

// Shared immutable cache keyed by (grid, gamma, alpha).
const KernelTable& kernel_table(const Grid& grid, double gamma, double alpha);

// hbar(x) = (int R^2(x-y) xi0^2(y) h0^2(y) dy)^{1/2}, torus quadrature with
// the tabulated kernel.
Field hbar(const Field& h0, const Field& xi0, double gamma, double alpha);

// L_{2s} norm on the torus; s = infinity gives the sup norm.
double l2s_norm(const Field& xi0, double s);

// lhs = ell2 Sobolev norm of the truncated stack {xi0 h0 eta^k, k <= K_basis}
// at order gamma + alpha/2; rhs = ||hbar||_p; aux = the Young/Hoelder upper
// bound ||kernel||_{2r} ||xi0||_{2s} ||h0||_p on the same lattice.
InequalityReport check_lemma_l_last1(const Field& h0, const Field& xi0,
                                     const WhiteNoiseConfig& cfg);

// Affine problem data: f(u) = f_lin*u + f_aff, h(u) = h_lin*u + h_aff; the
// shaped noise is g^k(u) = xi * h(u) * eta^k.
struct WhiteNoiseProblem {
  Field u0;
  std::optional<Field> f_lin;
  std::optional<Field> f_aff;
  std::optional<Field> h_lin;
  std::optional<Field> h_aff;
  Field xi;
  bool jump_drivers = false;
  LevyMeasureSpec jump_spec;  // shared by all basis drivers when jump_drivers
};

// Expands the cylindrical driver over K_basis basis directions and delegates
// to picard_solve. Jump drivers are admitted only at p = 2.
PicardResult solve_white_noise(const WhiteNoiseProblem& prob,
                               const WhiteNoiseConfig& wn, SolverConfig cfg,
                               int mc_paths = 1);

}  // namespace frlab
