#pragma once

#include <complex>
#include <vector>

#include "frlab/grid.hpp"

namespace frlab {

// Real-valued grid function. Values are stored row-major over the node
// lattice {0,...,N-1}^d.
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.total_nodes(), 0.0) {}
  Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.total_nodes())
      throw std::invalid_argument("field: size mismatch with grid");
  }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }

  bool finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double c);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);

// Pointwise product.
Field hadamard(const Field& a, const Field& b);

// Fourier coefficients of a field, indexed by the same row-major layout as
// the node lattice; entry j corresponds to frequency integers
// (freq_int(j_1),...,freq_int(j_d)). Normalized so that the coefficient of
// e^{i xi . x} is its complex amplitude: inverse(forward(u)) == u.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.total_nodes()) {}
};

SpectralField forward_transform(const Field& u);
Field inverse_transform(const SpectralField& s);

// K-component family sharing one grid (truncated ell_2-valued data).
struct FieldStack {
  Grid grid;
  std::vector<Field> components;

  FieldStack() = default;
  FieldStack(const Grid& g, int count)
      : grid(g), components(count, Field(g)) {}
  explicit FieldStack(std::vector<Field> comps);

  int count() const { return static_cast<int>(components.size()); }

  // Pointwise (sum_k g_k(x)^2)^{1/2}.
  Field ell2_magnitude() const;
};

}  // namespace frlab
