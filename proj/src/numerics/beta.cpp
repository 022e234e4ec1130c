#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "combo/numerics.hpp"

namespace combo {

namespace {

/// log Gamma(x + m) - log Gamma(x) for integer m >= 0.
double log_rising(double x, int m) {
  if (m == 0) return 0.0;
  if (m <= 24) {
    double acc = 0.0;
    double prod = 1.0;
    for (int i = 0; i < m; ++i) {
      prod *= x + i;
      if (prod > 1e250) {
        acc += std::log(prod);
        prod = 1.0;
      }
    }
    return acc + std::log(prod);
  }
  int sign = 0;
  return ::lgamma_r(x + m, &sign) - ::lgamma_r(x, &sign);
}

}  // namespace

BetaParams::BetaParams(double shape_a, double shape_b) : a(shape_a), b(shape_b) {
  require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
          ErrorCode::invalid_argument, "beta shapes must be positive");
}

BetaParams beta_posterior(BetaParams prior, int y, int n) {
  require(y >= 0 && y <= n, ErrorCode::invalid_counts, "beta posterior needs 0 <= y <= n");
  return {prior.a + y, prior.b + (n - y)};
}

double beta_cdf(BetaParams p, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(p.a, p.b, x);
}

double prob_in_interval(BetaParams p, double lo, double hi) {
  require(lo >= 0.0 && lo < hi && hi <= 1.0, ErrorCode::invalid_argument,
          "interval must satisfy 0 <= lo < hi <= 1");
  // Take the difference on the tail that keeps precision.
  if (lo > p.mean()) {
    const double upper_lo = lo > 0.0 ? boost::math::ibetac(p.a, p.b, lo) : 1.0;
    const double upper_hi = hi < 1.0 ? boost::math::ibetac(p.a, p.b, hi) : 0.0;
    return upper_lo - upper_hi;
  }
  return beta_cdf(p, hi) - beta_cdf(p, lo);
}

double beta_binomial_kernel(int y, int n, double a, double b) {
  return log_rising(a, y) + log_rising(b, n - y) - log_rising(a + b, n);
}

double beta_binomial_pmf(int y, int n, double a, double b) {
  require(y >= 0 && y <= n, ErrorCode::invalid_counts, "beta-binomial needs 0 <= y <= n");
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(y + 1.0) - std::lgamma(n - y + 1.0);
  return std::exp(log_choose + beta_binomial_kernel(y, n, a, b));
}

std::pair<double, double> exact_binomial_ci(int y, int n, double level) {
  require(n >= 1, ErrorCode::invalid_counts, "binomial interval needs n >= 1");
  require(y >= 0 && y <= n, ErrorCode::invalid_counts, "binomial interval needs 0 <= y <= n");
  require(level > 0.0 && level < 1.0, ErrorCode::invalid_argument, "level must lie in (0,1)");
  const double alpha = 1.0 - level;
  const double lo = y == 0 ? 0.0 : boost::math::ibeta_inv(double(y), double(n - y + 1), alpha / 2);
  const double hi =
      y == n ? 1.0 : boost::math::ibeta_inv(double(y + 1), double(n - y), 1.0 - alpha / 2);
  return {lo, hi};
}

}  // namespace combo
