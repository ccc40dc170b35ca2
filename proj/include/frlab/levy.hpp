#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace frlab {

// Finite-activity jump measure: a list of atoms (mark, rate). Infinite-
// activity radial tails are discretized into atoms at construction so that
// simulation is exact compound Poisson and compensators / moment constants
// are finite sums.
struct LevyMeasureSpec {
  struct Atom {
    std::vector<double> z;  // mark in R^m
    double rate = 0.0;
  };

  int dim = 1;
  std::vector<Atom> atoms;

  LevyMeasureSpec() = default;
  LevyMeasureSpec(int m, std::vector<Atom> a);

  // Discretize the radial density c*|z|^{-m-alpha_tail} on [eps, R] (d=1:
  // symmetric atoms at +/- bin centroids) into n_bins log-spaced bins.
  static LevyMeasureSpec radial_tail(double c, double alpha_tail, double eps,
                                     double R, int n_bins);

  double total_rate() const;
  // sum_i z_i * rate_i, the compensator drift per unit time.
  std::vector<double> mean_jump() const;
  double max_mark_abs() const;
};

// (sum_i |z_i|^q rate_i)^{1/q}; 0 for an empty atom list.
double moment_constant(const LevyMeasureSpec& spec, double q);

struct MomentConstants {
  double c2 = 0.0;
  double cp = 0.0;
  double chat = 0.0;
};

MomentConstants moment_constants(const LevyMeasureSpec& spec, double p);

struct LevyTriplet {
  std::vector<double> drift;          // alpha^k in R^m
  std::vector<double> gaussian;       // m x m matrix, row-major
  LevyMeasureSpec jumps;
  bool recentred = false;

  static LevyTriplet pure_jump(LevyMeasureSpec spec);
  static LevyTriplet wiener(int m);

  // Absorb the big-jump mean int_{|z|>=1} z nu(dz) into the drift so the
  // jump part is fully compensated.
  LevyTriplet recentre() const;
  int dim() const { return static_cast<int>(drift.size()); }
};

struct JumpEvent {
  double time = 0.0;
  std::vector<double> mark;
};

// One sampled driver on [0,T] with step dt: Gaussian increments per step and
// a sorted list of jump events. Bit-reproducible from (spec, seed, stream,
// T, dt).
struct DriverPath {
  double horizon = 0.0;
  double dt = 0.0;
  std::vector<std::vector<double>> wiener_increments;  // per step, size m
  std::vector<JumpEvent> jump_events;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  int steps() const { return static_cast<int>(wiener_increments.size()); }
};

// Compound-Poisson + Gaussian sampling of the triplet. `stream` keys the
// per-driver substream so driver counts can grow without perturbing earlier
// drivers.
DriverPath sample_path(const LevyTriplet& triplet, double T, double dt,
                       std::uint64_t seed, std::uint64_t stream = 0);

// int_0^T H(s-) . dY_s for a compensated recentred jump part: jump sums
// minus the compensator integral. H is piecewise constant on the dt grid
// (left-continuous, predictable evaluation).
double compensated_integral(const std::vector<std::vector<double>>& H,
                            const LevyMeasureSpec& spec, const DriverPath& path);

// Remove events with |z| > n; the second member is the first removed time.
std::pair<DriverPath, std::optional<double>> truncate_big_jumps(
    const DriverPath& path, double n);

}  // namespace frlab
