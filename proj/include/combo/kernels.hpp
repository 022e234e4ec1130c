#pragma once

#include <cstddef>
#include <string_view>

namespace combo::kernels {

/// Inner loops of the tabulated quadrature posterior. Every variant in a
/// table computes the same quantities; vector variants may differ from the
/// scalar reference only by rounding and summation order.
struct KernelTable {
  std::string_view name;

  /// acc[i] += y * log_p[i] + m * log_q[i]
  void (*accumulate_binomial)(double* acc, const double* log_p, const double* log_q, double y,
                              double m, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
  /// out[i] = exp(x[i] - shift); returns the sum of out.
  double (*exp_shift)(double* out, const double* x, double shift, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// Sum of w[i] over lo < x[i] < hi.
  double (*interval_mass)(const double* w, const double* x, double lo, double hi, std::size_t n);
  /// One pass: out = {sum w*x, sum w over x < cut, sum w over x > cut}.
  void (*split_moments)(const double* w, const double* x, double cut, std::size_t n, double* out);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// Table chosen once at first use: AVX2 when available unless the
/// COMBO_KERNELS environment variable is "scalar".
const KernelTable& active() noexcept;

}  // namespace combo::kernels
