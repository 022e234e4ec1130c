#include <doctest.h>

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "combo/numerics.hpp"
#include "oracles.hpp"

using namespace combo;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

TEST_CASE("beta_posterior conjugacy") {
  auto p = beta_posterior({1, 1}, 0, 0);
  CHECK(p.a == 1.0);
  CHECK(p.b == 1.0);
  p = beta_posterior({1, 1}, 2, 6);
  CHECK(p.a == 3.0);
  CHECK(p.b == 5.0);
  p = beta_posterior({0.3, 0.7}, 1, 3);
  CHECK(p.a == doctest::Approx(1.3));
  CHECK(p.b == doctest::Approx(2.7));
  CHECK_THROWS_AS(beta_posterior({1, 1}, 4, 3), Error);
  CHECK_THROWS_AS(BetaParams(0.0, 1.0), Error);
}

TEST_CASE("prob_in_interval") {
  CHECK(prob_in_interval({1, 1}, 0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob_in_interval({1, 1}, 0.18, 0.42) == doctest::Approx(0.24).epsilon(1e-12));
  // frozen from an independent incomplete-beta evaluation
  CHECK(std::abs(prob_in_interval({3, 5}, 0.18, 0.42) - 0.5074426669823997) < 1e-10);
  CHECK_THROWS_AS(prob_in_interval({1, 1}, 0.4, 0.4), Error);
  for (double a : {0.3, 1.0, 4.5, 40.0}) {
    for (double b : {0.5, 2.0, 61.0}) CHECK(prob_in_interval({a, b}, 0, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("prob_in_interval against Monte Carlo") {
  std::mt19937_64 rng(2024);
  std::gamma_distribution<double> ga(3.0, 1.0), gb(5.0, 1.0);
  const int draws = 10'000'000;
  long hits = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = ga(rng), y = gb(rng);
    const double u = x / (x + y);
    hits += (u > 0.18 && u < 0.42);
  }
  const double p = double(hits) / draws;
  const double se = std::sqrt(p * (1 - p) / draws);
  CHECK(std::abs(prob_in_interval({3, 5}, 0.18, 0.42) - p) < 3 * se);
}

TEST_CASE("beta-binomial marginal") {
  double total = 0.0;
  for (int y = 0; y <= 7; ++y) total += beta_binomial_pmf(y, 7, 1.7, 3.2);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // a = b = 1 gives the discrete uniform
  CHECK(beta_binomial_pmf(2, 5, 1, 1) == doctest::Approx(1.0 / 6));
  // large counts take the lgamma path and must agree with the product path
  const double direct = beta_binomial_kernel(30, 60, 2.5, 4.0);
  double manual = 0.0;
  for (int i = 0; i < 30; ++i) manual += std::log(2.5 + i) + std::log(4.0 + i);
  for (int i = 0; i < 60; ++i) manual -= std::log(6.5 + i);
  CHECK(direct == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("exact_binomial_ci matches tail-sum oracle") {
  auto [lo, hi] = exact_binomial_ci(3, 10);
  CHECK(std::abs(lo - 0.06673951117773447) < 1e-9);
  CHECK(std::abs(hi - 0.6524528500599973) < 1e-9);
  CHECK(exact_binomial_ci(0, 12).first == 0.0);
  CHECK(exact_binomial_ci(12, 12).second == 1.0);
  CHECK_THROWS_AS(exact_binomial_ci(0, 0), Error);
  for (int n : {1, 2, 5, 12, 30, 60}) {
    for (int y = 0; y <= n; ++y) {
      auto got = exact_binomial_ci(y, n, 0.95);
      auto want = oracle::clopper_pearson(y, n, 0.95);
      CHECK(std::abs(got.first - want.first) < 1e-9);
      CHECK(std::abs(got.second - want.second) < 1e-9);
    }
  }
}

TEST_CASE("pava 1-D") {
  std::vector<double> v{0.4, 0.2}, w{1, 1};
  auto f = pava(v, w);
  CHECK(f[0] == doctest::Approx(0.3));
  CHECK(f[1] == doctest::Approx(0.3));
  std::vector<double> v2{1, 3, 2, 4}, w2{1, 1, 3, 1};
  auto f2 = pava(v2, w2);
  CHECK(f2[1] == doctest::Approx(2.25));
  CHECK(f2[2] == doctest::Approx(2.25));
}

namespace {

std::vector<std::pair<int, int>> grid_edges(const DoseGrid& g) {
  std::vector<std::pair<int, int>> e;
  for (Dose d : all_doses(g)) {
    if (d.j < g.J) e.push_back({g.index(d), g.index({d.j + 1, d.k})});
    if (d.k < g.K) e.push_back({g.index(d), g.index({d.j, d.k + 1})});
  }
  return e;
}

bool isotonic(const Matrix& m, double tol) {
  const DoseGrid& g = m.shape();
  for (Dose d : all_doses(g)) {
    if (d.j < g.J && m({d.j + 1, d.k}) < m(d) - tol) return false;
    if (d.k < g.K && m({d.j, d.k + 1}) < m(d) - tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("pava_2d fixed points and small cases") {
  Matrix v(DoseGrid(2, 1));
  v({1, 1}) = 0.4;
  v({2, 1}) = 0.2;
  auto f = pava_2d(v, Matrix(v.shape(), 1.0));
  CHECK(f({1, 1}) == doctest::Approx(0.3));
  CHECK(f({2, 1}) == doctest::Approx(0.3));

  Matrix iso(DoseGrid(3, 2));
  for (Dose d : all_doses(iso.shape())) iso(d) = 0.1 * d.j + 0.2 * d.k;
  CHECK(pava_2d(iso, Matrix(iso.shape(), 2.0)) == iso);
  CHECK_THROWS_AS(pava_2d(iso, Matrix(iso.shape(), 0.0)), Error);
}

TEST_CASE("pava_2d matches exact isotonic least squares") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1), wu(0.5, 10);
  for (int t = 0; t < 1000; ++t) {
    DoseGrid g(1 + int(rng() % 3), 1 + int(rng() % 3));
    Matrix v(g), w(g);
    for (double& x : v.data()) x = u(rng);
    for (double& x : w.data()) x = (t % 2) ? wu(rng) : 1.0;
    const auto fit = pava_2d(v, w);
    const auto want = oracle::isotonic_exact(v.data(), w.data(), grid_edges(g));
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(fit.data()[i] - want[i]) < 1e-6);
    CHECK(isotonic(fit, 1e-12));
    const auto again = pava_2d(fit, w);
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(again.data()[i] - fit.data()[i]) < 1e-12);
  }
}

TEST_CASE("pava_2d preserves pooled-block means on larger grids") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    DoseGrid g(5, 3);
    Matrix v(g), w(g);
    for (double& x : v.data()) x = u(rng);
    for (double& x : w.data()) x = 1 + double(rng() % 12);
    const auto fit = pava_2d(v, w);
    CHECK(isotonic(fit, 1e-10));
    double sw = 0, swv = 0, swf = 0;
    for (std::size_t i = 0; i < v.data().size(); ++i) {
      sw += w.data()[i];
      swv += w.data()[i] * v.data()[i];
      swf += w.data()[i] * fit.data()[i];
    }
    CHECK(swf / sw == doctest::Approx(swv / sw).epsilon(1e-9));
  }
}

TEST_CASE("isotonic_subset matches exact fit on the induced order") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 300; ++t) {
    DoseGrid g(1 + int(rng() % 4), 1 + int(rng() % 3));
    Matrix v(g), w(g, 1.0);
    Grid<char> mask(g, 0);
    std::vector<int> cells;
    for (int i = 0; i < g.size(); ++i) {
      if (rng() % 3 != 0 && cells.size() < 7) {
        mask.data()[std::size_t(i)] = 1;
        cells.push_back(i);
      }
      v.data()[std::size_t(i)] = u(rng);
      w.data()[std::size_t(i)] = 2 + double(rng() % 6);
    }
    const auto fit = isotonic_subset(v, w, mask);
    std::vector<double> vs, ws;
    for (int c : cells) {
      vs.push_back(v.data()[std::size_t(c)]);
      ws.push_back(w.data()[std::size_t(c)]);
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t b = 0; b < cells.size(); ++b) {
        if (a != b && precedes_or_equal(g.dose(cells[a]), g.dose(cells[b]))) edges.push_back({int(a), int(b)});
      }
    }
    if (edges.size() > 14) continue;
    const auto want = oracle::isotonic_exact(vs, ws, edges);
    for (std::size_t a = 0; a < cells.size(); ++a) {
      CHECK(std::abs(fit.data()[std::size_t(cells[a])] - want[a]) < 1e-9);
    }
    for (int i = 0; i < g.size(); ++i) {
      if (!mask.data()[std::size_t(i)]) CHECK(std::isnan(fit.data()[std::size_t(i)]));
    }
  }
}

TEST_CASE("grid_posterior") {
  SUBCASE("constant likelihood gives uniform weights") {
    std::vector<int> res{7, 5};
    auto gp = grid_posterior([](auto) { return 0.0; }, [](auto) { return 1.0; },
                             {{0, 0}, {1, 2}}, res);
    double s = 0;
    for (double w : gp.weights) {
      CHECK(w == doctest::Approx(1.0 / 35));
      s += w;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("1-D binomial posterior mean matches conjugate form") {
    const int y = 4, n = 11;
    std::vector<int> res{61};
    auto gp = grid_posterior(
        [&](std::span<const double> t) { return y * std::log(t[0]) + (n - y) * std::log1p(-t[0]); },
        [](auto) { return 1.0; }, {{0}, {1}}, res);
    const double mean = gp.expect([](std::span<const double> t) { return t[0]; });
    CHECK(std::abs(mean - (y + 1.0) / (n + 2.0)) < 1e-3);
  }
  SUBCASE("separable 2-D target reproduces 1-D marginals") {
    auto la = [](double x) { return 3 * std::log(x) + 5 * std::log1p(-x); };
    auto lb = [](double x) { return -std::pow(x - 0.7, 2) / 0.02; };
    std::vector<int> r2{41, 31}, ra{41}, rb{31};
    auto joint = grid_posterior([&](std::span<const double> t) { return la(t[0]) + lb(t[1]); },
                                [](auto) { return 1.0; }, {{0, 0}, {1, 1.5}}, r2);
    auto ma = grid_posterior([&](std::span<const double> t) { return la(t[0]); },
                             [](auto) { return 1.0; }, {{0}, {1}}, ra);
    auto mb = grid_posterior([&](std::span<const double> t) { return lb(t[0]); },
                             [](auto) { return 1.0; }, {{0}, {1.5}}, rb);
    for (int i = 0; i < 41; ++i) {
      double s = 0;
      for (int k = 0; k < 31; ++k) s += joint.weights[std::size_t(i * 31 + k)];
      CHECK(std::abs(s - ma.weights[std::size_t(i)]) < 1e-6);
    }
    for (int k = 0; k < 31; ++k) {
      double s = 0;
      for (int i = 0; i < 41; ++i) s += joint.weights[std::size_t(i * 31 + k)];
      CHECK(std::abs(s - mb.weights[std::size_t(k)]) < 1e-6);
    }
  }
  SUBCASE("zero mass everywhere is reported") {
    std::vector<int> res{5};
    CHECK_THROWS_AS(grid_posterior([](auto) { return kNegInf; }, [](auto) { return 1.0; },
                                   {{0}, {1}}, res),
                    Error);
  }
}

TEST_CASE("rw_sampler") {
  SUBCASE("binomial posterior mean") {
    const int y = 4, n = 11;
    auto lp = [&](std::span<const double> t) {
      if (t[0] <= 0 || t[0] >= 1) return kNegInf;
      return y * std::log(t[0]) + (n - y) * std::log1p(-t[0]);
    };
    std::vector<double> init{0.5}, scale{0.2};
    auto chain = rw_sampler(lp, init, 22000, 2000, scale, 3);
    CHECK(std::abs(chain.mean()[0] - (y + 1.0) / (n + 2.0)) < 0.01);
    CHECK(chain.acceptance > 0.2);
    CHECK(chain.acceptance < 0.8);
  }
  SUBCASE("gaussian covariance") {
    // covariance [[1, 0.5], [0.5, 2]]
    const double det = 1 * 2 - 0.25;
    auto lp = [&](std::span<const double> t) {
      const double x = t[0], y = t[1];
      return -0.5 * (2 * x * x - 2 * 0.5 * x * y + 1 * y * y) / det;
    };
    std::vector<double> init{0, 0}, scale{1.2, 1.6};
    auto chain = rw_sampler(lp, init, 202000, 2000, scale, 8);
    const auto m = chain.mean();
    double cxx = 0, cxy = 0, cyy = 0;
    for (std::size_t i = 0; i < chain.kept(); ++i) {
      const auto r = chain.row(i);
      cxx += (r[0] - m[0]) * (r[0] - m[0]);
      cxy += (r[0] - m[0]) * (r[1] - m[1]);
      cyy += (r[1] - m[1]) * (r[1] - m[1]);
    }
    const double k = double(chain.kept());
    CHECK(std::abs(cxx / k - 1.0) < 0.1);
    CHECK(std::abs(cxy / k - 0.5) < 0.1 * 0.5 + 0.05);
    CHECK(std::abs(cyy / k - 2.0) < 0.2);
  }
  SUBCASE("determinism and errors") {
    auto lp = [](std::span<const double> t) { return -t[0] * t[0]; };
    std::vector<double> init{0}, scale{1};
    auto a = rw_sampler(lp, init, 500, 100, scale, 42);
    auto b = rw_sampler(lp, init, 500, 100, scale, 42);
    CHECK(a.samples == b.samples);
    auto bad = [](std::span<const double>) { return kNegInf; };
    CHECK_THROWS_AS(rw_sampler(bad, init, 500, 100, scale, 1), Error);
    CHECK_THROWS_AS(rw_sampler(lp, init, 100, 100, scale, 1), Error);
  }
}

namespace {

// Indifference-interval recursion written in terms of the power-model
// exponent at each boundary.
std::vector<double> skeleton_oracle(double delta, int pos, int levels, double phi) {
  std::vector<double> s(static_cast<std::size_t>(levels));
  s[std::size_t(pos - 1)] = phi;
  for (int i = pos - 1; i >= 1; --i) {
    const double e = std::log(phi + delta) / std::log(s[std::size_t(i)]);  // s_i^e = phi + delta
    s[std::size_t(i - 1)] = std::pow(phi - delta, 1.0 / e);              // s_{i-1}^e = phi - delta
  }
  for (int i = pos; i < levels; ++i) {
    const double e = std::log(phi - delta) / std::log(s[std::size_t(i - 1)]);
    s[std::size_t(i)] = std::pow(phi + delta, 1.0 / e);
  }
  return s;
}

}  // namespace

TEST_CASE("crm_skeleton") {
  auto s = crm_skeleton({0.05, 11, 15, 0.3});
  CHECK(s[10] == 0.3);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
  auto alt = crm_skeleton({0.03, 13, 15, 0.3});
  const auto want = skeleton_oracle(0.03, 13, 15, 0.3);
  for (std::size_t i = 0; i < alt.size(); ++i) CHECK(std::abs(alt[i] - want[i]) < 1e-9);
  CHECK(alt[12] == 0.3);
  CHECK_THROWS_AS(crm_skeleton({0.05, 16, 15, 0.3}), Error);
  CHECK_THROWS_AS(crm_skeleton({0.35, 5, 15, 0.3}), Error);
  // a wide interval far below the top underflows the lowest levels to 0
  CHECK_THROWS_AS(crm_skeleton({0.1, 15, 15, 0.3}), Error);
  for (double d : {0.01, 0.03, 0.05}) {
    for (int pos : {1, 5, 15}) {
      auto v = crm_skeleton({d, pos, 15, 0.3});
      for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
    }
  }
}
