#include "frlab/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace frlab {

bool Field::finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

Field& Field::operator+=(const Field& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("field: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (!(grid == o.grid)) throw std::invalid_argument("field: grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& v : values) v *= c;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field hadamard(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field: grid mismatch");
  Field out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a.values[i] * b.values[i];
  return out;
}

namespace {

struct PlanKey {
  int dim;
  int n;
  int sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(dim, n, sign) < std::tie(o.dim, o.n, o.sign);
  }
};

// fftw planning is not thread-safe; executions on distinct buffers are.
class PlanCache {
 public:
  fftw_plan get(const Grid& g, int sign, fftw_complex* in, fftw_complex* out) {
    std::lock_guard<std::mutex> lk(mu_);
    PlanKey key{g.dim, g.modes_per_axis, sign};
    auto it = plans_.find(key);
    if (it == plans_.end()) {
      std::vector<int> dims(g.dim, g.modes_per_axis);
      // Plan on scratch buffers; FFTW_ESTIMATE plans are buffer-agnostic
      // when executed through fftw_execute_dft.
      std::vector<fftw_complex> a(g.total_nodes()), b(g.total_nodes());
      fftw_plan p = fftw_plan_dft(g.dim, dims.data(), a.data(), b.data(), sign,
                                  FFTW_ESTIMATE);
      it = plans_.emplace(key, p).first;
    }
    fftw_plan p = it->second;
    (void)in;
    (void)out;
    return p;
  }

 private:
  std::mutex mu_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

SpectralField forward_transform(const Field& u) {
  const std::size_t n = u.grid.total_nodes();
  std::vector<std::complex<double>> in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = u.values[i];
  fftw_plan p =
      cache().get(u.grid, FFTW_FORWARD, reinterpret_cast<fftw_complex*>(in.data()),
                  reinterpret_cast<fftw_complex*>(out.data()));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  SpectralField s(u.grid);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) s.coeffs[i] = out[i] * scale;
  return s;
}

Field inverse_transform(const SpectralField& s) {
  const std::size_t n = s.grid.total_nodes();
  std::vector<std::complex<double>> in(s.coeffs), out(n);
  fftw_plan p =
      cache().get(s.grid, FFTW_BACKWARD, reinterpret_cast<fftw_complex*>(in.data()),
                  reinterpret_cast<fftw_complex*>(out.data()));
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  Field u(s.grid);
  for (std::size_t i = 0; i < n; ++i) u.values[i] = out[i].real();
  return u;
}

FieldStack::FieldStack(std::vector<Field> comps) {
  if (comps.empty()) throw std::invalid_argument("stack: needs >= 1 component");
  grid = comps.front().grid;
  for (const auto& c : comps)
    if (!(c.grid == grid))
      throw std::invalid_argument("stack: components must share one grid");
  components = std::move(comps);
}

Field FieldStack::ell2_magnitude() const {
  Field out(grid);
  for (const auto& c : components)
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += c.values[i] * c.values[i];
  for (double& v : out.values) v = std::sqrt(v);
  return out;
}

}  // namespace frlab
