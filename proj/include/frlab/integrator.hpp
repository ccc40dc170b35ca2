#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "frlab/field.hpp"
#include "frlab/levy.hpp"
#include "frlab/spectral.hpp"

namespace frlab {

using TimeField = std::function<Field(double)>;        // null == zero
using TimeStack = std::function<FieldStack(double)>;   // null == zero

// Structural coefficients of the semilinear right-hand side
//   f(u) = b * D^{beta1} u + sum_i c^i u_{x_i} 1_{alpha>1} + d*u + f0(t)
//   h^k(u) = eta^k * D^{beta2} u + l^k * u + h0^k(t)
//   g^{k,j}(u) = sigma^{k,j} * D^{beta3_j} u + nu^{k,j} * u + g0^{k,j}(t)
// where D^{beta} is the fractional Laplacian of order beta.
struct CoefficientSet {
  double delta = 0.1;  // a(omega,t) stays in (delta, 1/delta)

  std::optional<Field> b;
  std::vector<Field> c;  // one per space dimension; empty == zero
  std::optional<Field> dcoef;
  TimeField f0;

  std::optional<FieldStack> eta;  // K components
  std::optional<FieldStack> l;
  TimeStack h0;

  std::vector<FieldStack> sigma;  // per mark component j
  std::vector<FieldStack> nu;
  std::vector<TimeStack> g0;

  double beta1 = 0.0;
  double beta2 = 0.0;
  std::vector<double> beta3;

  // Scale every u-dependent coefficient (not the affine f0/h0/g0 parts).
  CoefficientSet scaled(double factor) const;
};

struct SolverConfig {
  double alpha = 1.5;
  double gamma = 0.0;
  double p = 2.0;
  double T = 1.0;
  double dt = 1e-2;
  Grid grid;
  int K = 1;       // driver count
  int m = 1;       // mark dimension of the jump drivers
  double eps1 = 0.0;
  double delta = 0.1;
  double picard_tol = 1e-8;
  int picard_max_iters = 50;
  std::uint64_t seed = 0;
  bool diagnostics = true;

  // Per-path diffusivity sample a(t); null means a == 1.
  std::function<double(double)> a;

  int steps() const;
  void validate() const;  // throws std::invalid_argument naming the condition
};

// Bounded smooth random diffusivity: midpoint of (delta, 1/delta) plus a
// clipped Ornstein-Uhlenbeck perturbation, sampled on the dt grid.
std::function<double(double)> sample_diffusivity(double delta, double T,
                                                 double dt, std::uint64_t seed,
                                                 std::uint64_t stream);

struct SolutionPath {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<double> norm_gamma;        // H^gamma_p per time
  std::vector<double> norm_gamma_alpha;  // H^{gamma+alpha}_p per time
  std::vector<double> picard_history;

  const Field& final_state() const { return states.back(); }
};

struct JumpDriver {
  DriverPath path;
  LevyMeasureSpec spec;
  bool recentred = true;
};

struct DriverSet {
  std::vector<DriverPath> wiener;  // K scalar Wiener drivers
  std::vector<JumpDriver> jumps;   // K m-dimensional compensated jump drivers
};

// Sample a full driver set with independent substreams per driver index.
DriverSet sample_driver_set(const SolverConfig& cfg, const LevyTriplet& wiener,
                            const LevyTriplet& jump, std::uint64_t path_index);

// Linear problem data; any entry may be null for zero.
struct LinearData {
  Field u0;
  TimeField f;
  TimeStack h;                 // Wiener integrands, K components
  std::vector<TimeStack> g;    // per mark component j, K components each
};

// One exponential-Euler pass over the mild form: semigroup applied exactly
// in spectral space, forcing integrated exactly per mode, noise evaluated at
// left endpoints, jumps applied at their event times.
SolutionPath solve_linear(const LinearData& data, const DriverSet& drivers,
                          const SolverConfig& cfg);

SolutionPath solve_deterministic(const Field& u0, const TimeField& f,
                                 const SolverConfig& cfg);

SolutionPath stochastic_convolution_wiener(const TimeStack& g,
                                           const std::vector<DriverPath>& paths,
                                           const SolverConfig& cfg);

SolutionPath stochastic_convolution_jump(const std::vector<TimeStack>& g,
                                         const std::vector<JumpDriver>& paths,
                                         const SolverConfig& cfg);

struct NonlinearityValue {
  Field f;
  FieldStack h;
  std::vector<FieldStack> g;
};

NonlinearityValue evaluate_nonlinearity(const Field& u, double t,
                                        const CoefficientSet& coeffs,
                                        const SolverConfig& cfg);

struct PicardResult {
  std::vector<SolutionPath> paths;      // one per driver set
  std::vector<double> diff_history;     // ensemble difference norms
  int iterations = 0;
  int subintervals = 1;
};

class PicardDivergence : public std::runtime_error {
 public:
  PicardDivergence(std::string msg, std::vector<double> history)
      : std::runtime_error(std::move(msg)), ratio_history(std::move(history)) {}
  std::vector<double> ratio_history;
};

PicardResult picard_solve(const Field& u0, const CoefficientSet& coeffs,
                          const std::vector<DriverSet>& drivers,
                          const SolverConfig& cfg);

// Restriction of a driver path to [t0, t1], re-based at time 0.
DriverPath slice_path(const DriverPath& path, double t0, double t1);

// Discrete norm of the solution ensemble: time rectangle rule over
// H^{gamma+alpha}_p step norms, p-th-mean over the ensemble.
double ensemble_h_norm(const std::vector<SolutionPath>& paths, double gamma_eff,
                       const SolverConfig& cfg);

}  // namespace frlab
