#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace frlab {

// Uniform periodic grid on [0,L)^d with N nodes per axis (N even).
// Frequency integers per axis run over {-N/2,...,N/2-1}; the physical
// frequency is xi = (2*pi/L) * m.
struct Grid {
  int dim = 1;
  int modes_per_axis = 4;
  double length = 2.0 * M_PI;

  Grid() = default;
  Grid(int d, int n, double len) : dim(d), modes_per_axis(n), length(len) {
    if (d < 1) throw std::invalid_argument("grid: dim must be >= 1");
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("grid: modes_per_axis must be even and >= 4");
    if (!(len > 0.0)) throw std::invalid_argument("grid: length must be > 0");
  }

  double spacing() const { return length / modes_per_axis; }

  std::size_t total_nodes() const {
    std::size_t t = 1;
    for (int i = 0; i < dim; ++i) t *= static_cast<std::size_t>(modes_per_axis);
    return t;
  }

  // Signed frequency integer for a flat index along one axis.
  int freq_int(int idx) const {
    return idx < modes_per_axis / 2 ? idx : idx - modes_per_axis;
  }

  double freq_unit() const { return 2.0 * M_PI / length; }

  // |xi| for the flattened multi-index (row-major).
  double freq_abs(std::size_t flat) const {
    double s = 0.0;
    for (int ax = dim - 1; ax >= 0; --ax) {
      int idx = static_cast<int>(flat % modes_per_axis);
      flat /= modes_per_axis;
      double f = freq_unit() * freq_int(idx);
      s += f * f;
    }
    return std::sqrt(s);
  }

  // Signed frequency component along `axis` for a flat index.
  double freq_component(std::size_t flat, int axis) const {
    for (int ax = dim - 1; ax >= 0; --ax) {
      int idx = static_cast<int>(flat % modes_per_axis);
      if (ax == axis) return freq_unit() * freq_int(idx);
      flat /= modes_per_axis;
    }
    throw std::invalid_argument("grid: axis out of range");
  }

  // True if the flat index has a Nyquist component (m = -N/2) on `axis`.
  bool is_nyquist(std::size_t flat, int axis) const {
    for (int ax = dim - 1; ax >= 0; --ax) {
      int idx = static_cast<int>(flat % modes_per_axis);
      if (ax == axis) return idx == modes_per_axis / 2;
      flat /= modes_per_axis;
    }
    return false;
  }

  // Node coordinate along one axis for axis index j.
  double node(int j) const { return spacing() * j; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && modes_per_axis == o.modes_per_axis &&
           length == o.length;
  }
};

}  // namespace frlab
