// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "combo/kernels.hpp"

namespace combo::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Cephes exp: x = n ln2 + r, |r| <= ln2/2, exp(r) from a (2,3) Pade form.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo_limit = _mm256_set1_pd(-708.39641853226408);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo_limit);
  x = _mm256_min_pd(x, _mm256_set1_pd(709.78271289338397));

  const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878E-4), xx,
                               _mm256_set1_pd(3.02994407707441961300E-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042E-6), xx,
                               _mm256_set1_pd(2.52448340349684104192E-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009E0));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // 2^n via the 1.5*2^52 rounding trick (no 64-bit convert in AVX2).
  const __m256d magic = _mm256_set1_pd(0x1.8p52);
  __m256i n = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(fx, magic)),
                               _mm256_castpd_si256(magic));
  n = _mm256_slli_epi64(_mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(n));
  return _mm256_andnot_pd(underflow, r);
}

void accumulate_binomial(double* acc, const double* log_p, const double* log_q, double y,
                         double m, std::size_t n) {
  const __m256d vy = _mm256_set1_pd(y), vm = _mm256_set1_pd(m);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(acc + i);
    a = _mm256_add_pd(a, _mm256_fmadd_pd(vy, _mm256_loadu_pd(log_p + i),
                                         _mm256_mul_pd(vm, _mm256_loadu_pd(log_q + i))));
    _mm256_storeu_pd(acc + i, a);
  }
  for (; i < n; ++i) acc[i] += y * log_p[i] + m * log_q[i];
}

double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  }
  for (; i < n; ++i) m = std::max(m, x[i]);
  return m;
}

double exp_shift(double* out, const double* x, double shift, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vs));
    _mm256_storeu_pd(out + i, e);
    acc = _mm256_add_pd(acc, e);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    out[i] = std::exp(x[i] - shift);
    s += out[i];
  }
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double interval_mass(const double* w, const double* x, double lo, double hi, std::size_t n) {
  const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d inside =
        _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GT_OQ), _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
    acc = _mm256_add_pd(acc, _mm256_and_pd(inside, _mm256_loadu_pd(w + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    if (x[i] > lo && x[i] < hi) s += w[i];
  }
  return s;
}

void split_moments(const double* w, const double* x, double cut, std::size_t n, double* out) {
  const __m256d vc = _mm256_set1_pd(cut);
  __m256d m = _mm256_setzero_pd(), below = _mm256_setzero_pd(), above = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i), wv = _mm256_loadu_pd(w + i);
    m = _mm256_fmadd_pd(wv, v, m);
    below = _mm256_add_pd(below, _mm256_and_pd(_mm256_cmp_pd(v, vc, _CMP_LT_OQ), wv));
    above = _mm256_add_pd(above, _mm256_and_pd(_mm256_cmp_pd(v, vc, _CMP_GT_OQ), wv));
  }
  double sm = hsum(m), sb = hsum(below), sa = hsum(above);
  for (; i < n; ++i) {
    sm += w[i] * x[i];
    if (x[i] < cut) sb += w[i];
    if (x[i] > cut) sa += w[i];
  }
  out[0] = sm;
  out[1] = sb;
  out[2] = sa;
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
  static const KernelTable table{"avx2", accumulate_binomial, max_value, exp_shift, dot,
                                 interval_mass, split_moments};
  return table;
}

}  // namespace combo::kernels
