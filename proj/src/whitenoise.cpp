#include "frlab/whitenoise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace frlab {

namespace {

double order_q(double gamma, double alpha) { return gamma + alpha / 2.0; }

void require_q_range(double gamma, double alpha) {
  const double q = order_q(gamma, alpha);
  if (!(q > -1.0 && q < 0.0))
    throw std::invalid_argument("kernel: gamma + alpha/2 must be in (-1,0)");
}

// Smooth factor I(x) = int_0^inf t^{-(q+3)/2} e^{-t x^2 - 1/(4t)} dt, so that
// R_gamma(x) = |x|^{-(q+1)} I(x). Trapezoid after t = e^u; the integrand
// decays doubly exponentially at both ends.
double smooth_factor(double x, double q) {
  const double du = 0.02;
  double acc = 0.0;
  for (double u = -40.0; u <= 40.0; u += du) {
    const double t = std::exp(u);
    const double log_val = -(q + 1.0) / 2.0 * u - t * x * x - 1.0 / (4.0 * t);
    acc += std::exp(log_val);
  }
  return acc * du;
}

}  // namespace

ExponentCheck validate_exponents(const WhiteNoiseConfig& cfg) {
  ExponentCheck out;
  std::ostringstream msg;
  const double q = order_q(cfg.gamma, cfg.alpha);
  if (!(q > -1.0 && q < 0.0)) {
    out.valid = false;
    msg << "gamma + alpha/2 = " << q << " not in (-1,0); ";
  }
  if (!(cfg.p >= 2.0 * cfg.r && cfg.r >= 1.0)) {
    out.valid = false;
    msg << "p >= 2r >= 2 violated (p = " << cfg.p << ", r = " << cfg.r << "); ";
  }
  const double r_cap = 1.0 / (2.0 * cfg.gamma + cfg.alpha + 2.0);
  if (!(cfg.r < r_cap) || !(2.0 * cfg.gamma + cfg.alpha + 2.0 > 0.0)) {
    out.valid = false;
    msg << "r = " << cfg.r << " not below (2 gamma + alpha + 2)^{-1} = "
        << r_cap << "; ";
  }
  const double inv_s = std::isinf(cfg.s) ? 0.0 : 1.0 / cfg.s;
  if (std::abs(inv_s + 1.0 / cfg.r - 1.0) > 1e-12) {
    out.valid = false;
    msg << "1/s + 1/r = " << inv_s + 1.0 / cfg.r << " != 1; ";
  }
  out.message = out.valid ? "ok" : msg.str();
  return out;
}

Field basis_function(const Grid& g, int k) {
  if (g.dim != 1) throw std::invalid_argument("basis: grid must be 1-d");
  if (k < 1) throw std::invalid_argument("basis: index starts at 1");
  const double L = g.length;
  Field out(g);
  if (k == 1) {
    const double c = 1.0 / std::sqrt(L);
    for (double& v : out.values) v = c;
    return out;
  }
  const int m = k / 2;
  const double c = std::sqrt(2.0 / L);
  const double w = 2.0 * M_PI * m / L;
  for (int j = 0; j < g.modes_per_axis; ++j) {
    const double x = j * g.spacing();
    out.values[j] = (k % 2 == 0) ? c * std::cos(w * x) : c * std::sin(w * x);
  }
  return out;
}

double r_gamma_kernel(double x, double gamma, double alpha) {
  require_q_range(gamma, alpha);
  if (x == 0.0)
    throw std::invalid_argument("r_gamma_kernel: singular at x = 0");
  const double q = order_q(gamma, alpha);
  return std::pow(std::abs(x), -(q + 1.0)) * smooth_factor(x, q);
}

double KernelTable::lattice_norm(double qnorm) const {
  const double h = grid.spacing();
  double acc = 0.0;
  for (double v : values) acc += h * std::pow(std::abs(v), qnorm);
  return std::pow(acc, 1.0 / qnorm);
}

namespace {

// Cell average of R_gamma over [center-h/2, center+h/2]: the power law
// |v|^{-(q+1)} integrated exactly, the smooth factor frozen at a cell
// representative. Handles the singular cell centered at 0.
double cell_average(double center, double h, double q) {
  const double a = center - h / 2.0, b = center + h / 2.0;
  if (a < 0.0 && b > 0.0) {
    const double s = smooth_factor(h / 4.0, q);
    // int_{-h/2}^{h/2} |v|^{-(q+1)} dv = 2 (h/2)^{-q} / (-q)
    return s * 2.0 * std::pow(h / 2.0, -q) / (-q) / h;
  }
  const double lo = std::min(std::abs(a), std::abs(b));
  const double hi = std::max(std::abs(a), std::abs(b));
  const double s = smooth_factor(center, q);
  return s * (std::pow(hi, -q) - std::pow(lo, -q)) / (-q) / h;
}

std::map<std::tuple<int, double, double, double>, KernelTable> g_kernel_cache;
std::mutex g_kernel_mutex;

KernelTable build_kernel_table(const Grid& grid, double gamma, double alpha) {
  require_q_range(gamma, alpha);
  if (grid.dim != 1)
    throw std::invalid_argument("kernel: grid must be 1-d");
  const double q = order_q(gamma, alpha);
  const int N = grid.modes_per_axis;
  const double h = grid.spacing();
  const double L = grid.length;

  KernelTable table;
  table.grid = grid;
  table.gamma = gamma;
  table.alpha = alpha;
  table.values.assign(N, 0.0);
  for (int j = 0; j < N; ++j) {
    // Offsets j*h and (j-N)*h both map to lattice point j; periodize over
    // the window on both sides.
    double acc = 0.0;
    for (int w = -table.window_periods; w <= table.window_periods; ++w) {
      const double u = j * h + w * L;
      acc += cell_average(u, h, q);
    }
    table.values[j] = acc;
  }

  // Deconvolve the cell-average box filter: mode m of a cell-averaged
  // function is attenuated by sinc(xi_m h / 2). The table is even in the
  // lattice offset, so a cosine transform suffices.
  {
    std::vector<double> hat(N / 2 + 1);
    for (int m = 0; m <= N / 2; ++m) {
      const double xi = m * grid.freq_unit();
      double acc = 0.0;
      for (int j = 0; j < N; ++j)
        acc += h * table.values[j] * std::cos(xi * j * h);
      const double y = xi * h / 2.0;
      hat[m] = m == 0 ? acc : acc * y / std::sin(y);
    }
    for (int j = 0; j < N; ++j) {
      double acc = hat[0] + hat[N / 2] * std::cos(M_PI * j);
      for (int m = 1; m < N / 2; ++m)
        acc += 2.0 * hat[m] * std::cos(m * grid.freq_unit() * j * h);
      table.values[j] = acc / L;
    }
  }

  // Induced symbol on mode m versus the Bessel target (1+xi^2)^{q/2}.
  auto symbol = [&](int m) {
    const double xi = m * grid.freq_unit();
    double acc = 0.0;
    for (int j = 0; j < N; ++j) acc += h * table.values[j] * std::cos(xi * j * h);
    return acc;
  };
  auto target = [&](int m) {
    const double xi = m * grid.freq_unit();
    return std::pow(1.0 + xi * xi, q / 2.0);
  };
  table.c_fit = target(1) / symbol(1);
  double resid = 0.0;
  for (int m = 1; m <= N / 4; ++m)
    resid = std::max(resid,
                     std::abs(table.c_fit * symbol(m) / target(m) - 1.0));
  table.fit_residual = resid;
  for (double& v : table.values) v *= table.c_fit;
  return table;
}

}  // namespace

const KernelTable& kernel_table(const Grid& grid, double gamma, double alpha) {
  const std::tuple<int, double, double, double> key{
      grid.modes_per_axis, grid.length, gamma, alpha};
  std::lock_guard<std::mutex> lock(g_kernel_mutex);
  auto it = g_kernel_cache.find(key);
  if (it == g_kernel_cache.end())
    it = g_kernel_cache.emplace(key, build_kernel_table(grid, gamma, alpha))
             .first;
  return it->second;
}

Field hbar(const Field& h0, const Field& xi0, double gamma, double alpha) {
  if (!(h0.grid == xi0.grid))
    throw std::invalid_argument("hbar: grid mismatch");
  const KernelTable& table = kernel_table(h0.grid, gamma, alpha);
  const int N = h0.grid.modes_per_axis;
  const double h = h0.grid.spacing();
  std::vector<double> phi(N);
  for (int j = 0; j < N; ++j) {
    const double v = xi0.values[j] * h0.values[j];
    phi[j] = v * v;
  }
  Field out(h0.grid);
  for (int i = 0; i < N; ++i) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
      const double k = table.values[(i - j + N) % N];
      acc += h * k * k * phi[j];
    }
    out.values[i] = std::sqrt(acc);
  }
  return out;
}

double l2s_norm(const Field& xi0, double s) {
  if (std::isinf(s)) {
    double sup = 0.0;
    for (double v : xi0.values) sup = std::max(sup, std::abs(v));
    return sup;
  }
  return lp_norm(xi0, 2.0 * s);
}

InequalityReport check_lemma_l_last1(const Field& h0, const Field& xi0,
                                     const WhiteNoiseConfig& cfg) {
  InequalityReport rep;
  rep.name = "lemma_l_last1";
  rep.config_digest = ConfigDigest()
                          .add(rep.name)
                          .add(cfg.gamma)
                          .add(cfg.alpha)
                          .add(cfg.p)
                          .add(cfg.r)
                          .add(static_cast<double>(cfg.K_basis))
                          .hex();
  const ExponentCheck ec = validate_exponents(cfg);
  if (!ec.valid) {
    rep.flagged = true;
    rep.note = "exponent constraints violated: " + ec.message;
  }
  const double q = order_q(cfg.gamma, cfg.alpha);

  FieldStack stack(cfg.grid, cfg.K_basis);
  const Field prod = hadamard(xi0, h0);
  for (int k = 1; k <= cfg.K_basis; ++k)
    stack.components[k - 1] = hadamard(prod, basis_function(cfg.grid, k));
  rep.lhs = ell2_sobolev_norm(stack, q, cfg.p);
  rep.rhs = lp_norm(hbar(h0, xi0, cfg.gamma, cfg.alpha), cfg.p);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;

  const KernelTable& table = kernel_table(cfg.grid, cfg.gamma, cfg.alpha);
  rep.aux = table.lattice_norm(2.0 * cfg.r) * l2s_norm(xi0, cfg.s) *
            lp_norm(h0, cfg.p);
  rep.pass = rep.lhs <= rep.aux * (1.0 + 1e-8) + 1e-8;
  return rep;
}

PicardResult solve_white_noise(const WhiteNoiseProblem& prob,
                               const WhiteNoiseConfig& wn, SolverConfig cfg,
                               int mc_paths) {
  if (wn.grid.dim != 1)
    throw std::invalid_argument("white noise: grid must be 1-d");
  if (prob.jump_drivers && wn.p != 2.0)
    throw std::invalid_argument(
        "white noise: jump drivers require p = 2 (only an L2 theory is "
        "available)");
  cfg.grid = wn.grid;
  cfg.K = wn.K_basis;
  cfg.alpha = wn.alpha;
  cfg.gamma = wn.gamma;
  cfg.p = wn.p;
  cfg.validate();

  CoefficientSet coeffs;
  coeffs.delta = cfg.delta;
  if (prob.f_lin) coeffs.dcoef = prob.f_lin;
  if (prob.f_aff) {
    const Field f_aff = *prob.f_aff;
    coeffs.f0 = [f_aff](double) { return f_aff; };
  }

  std::vector<Field> shaped_lin, shaped_aff;
  for (int k = 1; k <= wn.K_basis; ++k) {
    const Field eta = basis_function(wn.grid, k);
    const Field xe = hadamard(prob.xi, eta);
    if (prob.h_lin) shaped_lin.push_back(hadamard(*prob.h_lin, xe));
    if (prob.h_aff) shaped_aff.push_back(hadamard(*prob.h_aff, xe));
  }

  if (prob.jump_drivers) {
    if (!shaped_lin.empty()) coeffs.nu.push_back(FieldStack(shaped_lin));
    if (!shaped_aff.empty()) {
      const FieldStack s(shaped_aff);
      coeffs.g0.push_back([s](double) { return s; });
    }
  } else {
    if (!shaped_lin.empty()) coeffs.l = FieldStack(shaped_lin);
    if (!shaped_aff.empty()) {
      const FieldStack s(shaped_aff);
      coeffs.h0 = [s](double) { return s; };
    }
  }

  const LevyTriplet wiener = LevyTriplet::wiener(1);
  LevyTriplet jump;
  if (prob.jump_drivers) jump = LevyTriplet::pure_jump(prob.jump_spec);
  std::vector<DriverSet> drivers;
  for (int i = 0; i < mc_paths; ++i)
    drivers.push_back(sample_driver_set(cfg, wiener, jump, i));

  return picard_solve(prob.u0, coeffs, drivers, cfg);
}

}  // namespace frlab
