#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "combo/kernels.hpp"
#include "combo/surface.hpp"

using namespace combo;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
  const auto* vec = kernels::avx2_kernels();
  if (!vec) {
    MESSAGE("AVX2 variant unavailable on this host; equivalence skipped");
    return;
  }
  const auto& ref = kernels::scalar_kernels();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u, 226981u}) {
    std::vector<double> p(n), lp(n), lq(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = u(rng);
      if (i % 97 == 0) p[i] = 0.0;
      lp[i] = p[i] > 0 ? std::log(p[i]) : -1e300;
      lq[i] = std::log1p(-p[i]);
      w[i] = u(rng);
    }
    std::vector<double> a(n, 0.5), b(n, 0.5);
    ref.accumulate_binomial(a.data(), lp.data(), lq.data(), 2.0, 7.0, n);
    vec->accumulate_binomial(b.data(), lp.data(), lq.data(), 2.0, 7.0, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel(a[i], b[i]) < 1e-13);
    // zero DLTs must not turn the log(0) floor into NaN
    ref.accumulate_binomial(a.data(), lp.data(), lq.data(), 0.0, 3.0, n);
    vec->accumulate_binomial(b.data(), lp.data(), lq.data(), 0.0, 3.0, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::isfinite(b[i]));
      CHECK(rel(a[i], b[i]) < 1e-13);
    }
    if (n == 0) continue;
    CHECK(ref.max_value(a.data(), n) == vec->max_value(a.data(), n));
    std::vector<double> x(n), ea(n), eb(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = -800.0 * u(rng);
    const double sa = ref.exp_shift(ea.data(), x.data(), -1.0, n);
    const double sb = vec->exp_shift(eb.data(), x.data(), -1.0, n);
    CHECK(rel(sa, sb) < 1e-12);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ea[i] - eb[i]) <= 1e-14 * std::max(ea[i], 1e-300) + 1e-300);
    CHECK(rel(ref.dot(w.data(), p.data(), n), vec->dot(w.data(), p.data(), n)) < 1e-12);
    CHECK(rel(ref.interval_mass(w.data(), p.data(), 0.18, 0.42, n),
              vec->interval_mass(w.data(), p.data(), 0.18, 0.42, n)) < 1e-12);
    double sr[3], sv[3];
    p[n / 2] = 0.3;  // a value exactly at the cut lands in neither side
    ref.split_moments(w.data(), p.data(), 0.3, n, sr);
    vec->split_moments(w.data(), p.data(), 0.3, n, sv);
    for (int i = 0; i < 3; ++i) CHECK(rel(sr[i], sv[i]) < 1e-12);
    CHECK(rel(sr[1], ref.interval_mass(w.data(), p.data(), -1.0, 0.3, n)) < 1e-12);
    CHECK(rel(sr[2], ref.interval_mass(w.data(), p.data(), 0.3, 2.0, n)) < 1e-12);
    CHECK(rel(sr[0], ref.dot(w.data(), p.data(), n)) < 1e-12);
  }
}

TEST_CASE("vector exp across the whole double range") {
  const auto* vec = kernels::avx2_kernels();
  if (!vec) return;
  const auto& ref = kernels::scalar_kernels();
  std::vector<double> x;
  for (double v = -760.0; v <= 0.0; v += 0.0137) x.push_back(v);
  std::vector<double> a(x.size()), b(x.size());
  ref.exp_shift(a.data(), x.data(), 0.0, x.size());
  vec->exp_shift(b.data(), x.data(), 0.0, x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > -708.0) {
      CHECK(rel(a[i], b[i]) < 4e-16 * 8);
      CHECK(std::abs(a[i] - b[i]) <= 4e-15 * a[i]);
    } else {
      CHECK(b[i] <= 1e-300);
    }
  }
}

TEST_CASE("tabulated surface posterior matches direct evaluation") {
  DoseGrid g(2, 2);
  const std::size_t nodes = 50;
  auto pi = [](std::size_t node, Dose d) {
    const double t = (node + 0.5) / 50.0;
    return 1.0 - std::pow(1.0 - t, d.j + d.k - 1);
  };
  TabulatedSurface surf(g, nodes, [&](std::size_t node, std::span<double> out) {
    for (Dose d : all_doses(g)) out[std::size_t(g.index(d))] = std::log1p(-pi(node, d));
  });
  TrialState s(g);
  s = record_cohort(s, {1, 1}, 3, 0);
  s = record_cohort(s, {2, 1}, 3, 1);
  s = record_cohort(s, {2, 2}, 3, 2);
  const auto w = surf.weights(s);
  std::vector<double> direct(nodes);
  double total = 0;
  for (std::size_t n = 0; n < nodes; ++n) {
    double l = 0;
    for (Dose d : all_doses(g)) {
      const double p = pi(n, d);
      l += s.y(d) * std::log(p) + (s.n(d) - s.y(d)) * std::log1p(-p);
    }
    direct[n] = std::exp(l);
    total += direct[n];
  }
  double mean = 0, mass = 0;
  for (std::size_t n = 0; n < nodes; ++n) {
    CHECK(w[n] == doctest::Approx(direct[n] / total).epsilon(1e-10));
    mean += direct[n] / total * pi(n, {1, 2});
    if (pi(n, {1, 2}) > 0.2 && pi(n, {1, 2}) < 0.4) mass += direct[n] / total;
  }
  CHECK(surf.mean(w, {1, 2}) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(surf.mass(w, {1, 2}, 0.2, 0.4) == doctest::Approx(mass).epsilon(1e-12));
}
