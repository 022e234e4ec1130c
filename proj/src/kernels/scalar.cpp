#include <algorithm>
#include <cmath>
#include <limits>

#include "combo/kernels.hpp"

namespace combo::kernels {

namespace {

void accumulate_binomial(double* acc, const double* log_p, const double* log_q, double y,
                         double m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += y * log_p[i] + m * log_q[i];
}

double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

double exp_shift(double* out, const double* x, double shift, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(x[i] - shift);
    s += out[i];
  }
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double interval_mass(const double* w, const double* x, double lo, double hi, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] > lo && x[i] < hi) s += w[i];
  }
  return s;
}

void split_moments(const double* w, const double* x, double cut, std::size_t n, double* out) {
  double m = 0.0, below = 0.0, above = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m += w[i] * x[i];
    if (x[i] < cut) below += w[i];
    if (x[i] > cut) above += w[i];
  }
  out[0] = m;
  out[1] = below;
  out[2] = above;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", accumulate_binomial, max_value, exp_shift, dot,
                                 interval_mass, split_moments};
  return table;
}

}  // namespace combo::kernels
