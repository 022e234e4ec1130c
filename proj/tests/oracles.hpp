#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

/// Exact weighted isotonic least squares under constraints x[a] <= x[b]
/// for every edge (a, b): enumerate every subset of edges as the active
/// set, pool the connected components, keep the feasible fit with the
/// smallest weighted SSE.
inline std::vector<double> isotonic_exact(const std::vector<double>& v,
                                          const std::vector<double>& w,
                                          const std::vector<std::pair<int, int>>& edges) {
  const std::size_t n = v.size();
  const std::size_t m = edges.size();
  std::vector<double> best;
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> parent(n);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t e = 0; e < m; ++e) {
      if (mask & (1UL << e)) {
        parent[find(std::size_t(edges[e].first))] = find(std::size_t(edges[e].second));
      }
    }
    std::vector<double> sw(n, 0.0), swv(n, 0.0), x(n);
    for (std::size_t i = 0; i < n; ++i) {
      sw[find(i)] += w[i];
      swv[find(i)] += w[i] * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = swv[find(i)] / sw[find(i)];
    bool ok = true;
    for (auto [a, b] : edges) ok = ok && x[std::size_t(a)] <= x[std::size_t(b)] + 1e-12;
    if (!ok) continue;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += w[i] * (x[i] - v[i]) * (x[i] - v[i]);
    if (sse < best_sse) {
      best_sse = sse;
      best = x;
    }
  }
  return best;
}

inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// P(X >= y) for X ~ Binomial(n, p), by direct summation.
inline double binom_upper(int y, int n, double p) {
  double s = 0.0;
  for (int i = y; i <= n; ++i) {
    s += std::exp(log_choose(n, i) + i * std::log(p) + (n - i) * std::log1p(-p));
  }
  return s;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  // f increasing on [lo, hi], root assumed inside
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Clopper-Pearson bounds from binomial tail equations.
inline std::pair<double, double> clopper_pearson(int y, int n, double level) {
  const double a = (1 - level) / 2;
  const double lo = y == 0 ? 0.0 : bisect([&](double p) { return binom_upper(y, n, p) - a; }, 0, 1);
  const double hi =
      y == n ? 1.0 : bisect([&](double p) { return (1 - binom_upper(y + 1, n, p)) * -1 + a; }, 0, 1);
  return {lo, hi};
}

}  // namespace oracle
