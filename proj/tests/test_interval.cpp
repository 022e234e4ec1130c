#include <doctest.h>

#include <cmath>
#include <random>

#include "combo/designs/interval.hpp"
#include "oracles.hpp"

using namespace combo;

TEST_CASE("boin boundaries match the closed forms") {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  // independent evaluation of the closed forms
  CHECK(std::abs(b.lambda_e - 0.23649068523646805) < 1e-9);
  CHECK(std::abs(b.lambda_d - 0.35851946464092954) < 1e-9);
  CHECK_THROWS_AS(boin_boundaries(0.3, 0.3, 0.42), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int t = 0; t < 1000; ++t) {
    const double phi = u(rng);
    const double p1 = phi * u(rng), p2 = phi + (1 - phi) * u(rng);
    if (!(p1 > 0 && p1 < phi && p2 > phi && p2 < 1)) continue;
    const auto r = boin_boundaries(phi, p1, p2);
    CHECK(r.lambda_e < phi);
    CHECK(r.lambda_d > phi);
  }
}

TEST_CASE("boin direction is a pure rate-vs-boundary rule") {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  for (int n = 1; n <= 30; ++n) {
    for (int y = 0; y <= n; ++y) {
      const double r = double(y) / n;
      const Direction want = r <= b.lambda_e   ? Direction::escalate
                             : r >= b.lambda_d ? Direction::deescalate
                                               : Direction::stay;
      CHECK(boin_direction(y, n, b) == want);
    }
  }
  CHECK(boin_direction(0, 3, b) == Direction::escalate);
  CHECK(boin_direction(1, 3, b) == Direction::stay);
  CHECK(boin_direction(2, 3, b) == Direction::deescalate);
}

TEST_CASE("keyboard keys tile the unit interval") {
  for (double phi : {0.2, 0.25, 0.3, 0.33}) {
    for (double e : {0.03, 0.05, 0.1}) {
      const auto k = keyboard_keys(phi, e, e);
      CHECK(k.keys.front().first == 0.0);
      CHECK(k.keys.back().second == 1.0);
      for (std::size_t i = 1; i < k.keys.size(); ++i) {
        CHECK(k.keys[i].first == doctest::Approx(k.keys[i - 1].second).epsilon(1e-12));
      }
      for (std::size_t i = 1; i + 1 < k.keys.size(); ++i) {
        CHECK(k.keys[i].second - k.keys[i].first == doctest::Approx(2 * e));
      }
      CHECK(k.keys[k.target_index].first == doctest::Approx(phi - e));
      CHECK(k.keys[k.target_index].second == doctest::Approx(phi + e));
    }
  }
}

TEST_CASE("keyboard direction") {
  const auto keys = keyboard_keys(0.3, 0.05, 0.05);
  CHECK(keyboard_direction(0, 3, keys, {}) == Direction::escalate);
  CHECK(keyboard_direction(3, 3, keys, {}) == Direction::deescalate);
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  for (int n = 1; n <= 12; ++n) {
    CHECK(keyboard_direction(0, n, keys, {}) == boin_direction(0, n, b));
    CHECK(keyboard_direction(n, n, keys, {}) == boin_direction(n, n, b));
  }
}

TEST_CASE("boin_decide moves") {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  DoseGrid g(5, 3);
  TrialState s(g);
  s = record_cohort(s, {1, 1}, 3, 0);
  auto d = boin_decide(s, {1, 1}, b, {});
  CHECK(d.action == Action::assign);
  CHECK(d.dose == Dose{2, 1});  // equal masses, equal n: increasing j first

  TrialState s2(g);
  s2 = record_cohort(s2, {1, 1}, 3, 3);
  CHECK(boin_decide(s2, {1, 1}, b, {}).dose == Dose{1, 1});

  TrialState s3(g);
  s3 = record_cohort(s3, {2, 2}, 3, 1);
  CHECK(boin_decide(s3, {2, 2}, b, {}).dose == Dose{2, 2});

  TrialState s4(g);
  s4 = record_cohort(s4, {2, 1}, 3, 1);
  s4 = record_cohort(s4, {1, 1}, 3, 0);
  // (2,1) has posterior Beta(2,3) vs untried (1,2) Beta(1,1)
  const double m21 = prob_in_interval({2, 3}, b.lambda_e, b.lambda_d);
  const double m12 = prob_in_interval({1, 1}, b.lambda_e, b.lambda_d);
  CHECK(boin_decide(s4, {1, 1}, b, {}).dose == (m21 > m12 ? Dose{2, 1} : Dose{1, 2}));
  // capped candidates are skipped
  CHECK(boin_decide(s4, {1, 1}, b, {}, 3).dose == Dose{1, 2});

  TrialState top(g);
  top = record_cohort(top, {5, 3}, 3, 0);
  CHECK(boin_decide(top, {5, 3}, b, {}).dose == Dose{5, 3});
  CHECK_THROWS_AS(boin_decide(TrialState(g), {1, 1}, b, {}), Error);
}

TEST_CASE("keyboard on a single-dose grid stays") {
  const auto keys = keyboard_keys(0.3, 0.05, 0.05);
  TrialState s(DoseGrid(1, 1));
  s = record_cohort(s, {1, 1}, 10, 3);
  auto d = keyboard_decide(s, {1, 1}, keys, {});
  CHECK(d.dose == Dose{1, 1});
  CHECK(keyboard_direction(3, 10, keys, {}) == Direction::stay);
}

TEST_CASE("decisions stay in the grid on random states") {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  const auto keys = keyboard_keys(0.3, 0.05, 0.05);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    DoseGrid g(1 + int(rng() % 5), 1 + int(rng() % 4));
    TrialState s(g);
    for (int c = 0; c < 6; ++c) {
      const Dose d = g.dose(int(rng() % std::uint64_t(g.size())));
      s = record_cohort(s, d, 3, int(rng() % 4));
    }
    const Dose cur = *s.current;
    CHECK(g.contains(boin_decide(s, cur, b, {}).dose));
    CHECK(g.contains(keyboard_decide(s, cur, keys, {}).dose));
  }
}

TEST_CASE("isotonic MTD selection") {
  DoseGrid g(5, 3);
  TrialState one(g);
  one = record_cohort(one, {1, 1}, 3, 1);
  CHECK(select_mtd_isotonic(one, 0.3, {}).selected == Dose{1, 1});
  CHECK_FALSE(select_mtd_isotonic(TrialState(g), 0.3, {}).selected);

  // estimates (y+1)/(n+2): 0.28 exactly needs n+2 = 25, y+1 = 7; 0.45 needs 9/20
  TrialState two(g);
  two = record_cohort(two, {1, 1}, 23, 6);
  two = record_cohort(two, {2, 1}, 18, 8);
  const auto r = select_mtd_isotonic(two, 0.3, {});
  CHECK(r.selected == Dose{1, 1});
  CHECK(*r.estimate == doctest::Approx(0.28));

  // brute force over tried doses with the same isotonic estimates
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    TrialState s(g);
    for (int c = 0; c < 8; ++c) {
      const Dose d = g.dose(int(rng() % 15));
      s = record_cohort(s, d, 3, int(rng() % 4));
    }
    const auto est = isotonic_estimates(s, {});
    const auto got = select_mtd_isotonic(s, 0.3, {});
    double best = 1e9;
    for (Dose d : all_doses(g)) {
      if (s.tried(d)) best = std::min(best, std::abs(est(d) - 0.3));
    }
    REQUIRE(got.selected);
    CHECK(s.tried(*got.selected));
    CHECK(std::abs(est(*got.selected) - 0.3) == doctest::Approx(best).epsilon(1e-12));
    CHECK(*got.estimate == est(*got.selected));
  }
}

TEST_CASE("isotonic tie rule prefers estimates at or below target") {
  DoseGrid g(2, 1);
  TrialState s(g);
  // (1,1): 2/10 -> 0.2 ; (2,1): 3/8 -> 0.4, both 0.1 from target
  s = record_cohort(s, {1, 1}, 8, 1);
  s = record_cohort(s, {2, 1}, 8, 3);
  const auto r = select_mtd_isotonic(s, 0.3, {});
  CHECK(r.selected == Dose{1, 1});
}

TEST_CASE("boundary table") {
  const auto b = boin_boundaries(0.3, 0.18, 0.42);
  const auto rows = boundary_table([&](int y, int n) { return boin_direction(y, n, b); }, 12);
  REQUIRE(rows.size() == 12);
  CHECK(*rows[2].escalate_max_y == 0);
  CHECK(*rows[2].deescalate_min_y == 2);
  const auto csv = boundary_table_csv(rows);
  CHECK(csv == boundary_table_csv(boundary_table([&](int y, int n) { return boin_direction(y, n, b); }, 12)));
  CHECK(boundary_table_csv({}) == "n,escalate_if_y_le,deescalate_if_y_ge\n");
  // n = 1: y = 0 escalates, y = 1 de-escalates
  CHECK(csv.find("\n1,0,1\n") != std::string::npos);
}

TEST_CASE("design objects") {
  BoinDesign boin(0.3, 0.18, 0.42);
  StudyConfig cfg;
  TrialState s(DoseGrid(5, 3));
  auto first = boin.next(s, cfg, 0);
  CHECK(first.dose == Dose{1, 1});
  CHECK(first.phase == Phase::startup);
  s = record_cohort(s, {1, 1}, 3, 0);
  auto d = boin.next(s, cfg, 0);
  CHECK(d.phase == Phase::model);
  CHECK(d.cohort_size == 3);
  KeyboardDesign kb(0.3, 0.05, 0.05);
  CHECK(kb.next(s, cfg, 0).dose == Dose{2, 1});
  CHECK(boin.supports_early_stop());
  CHECK(boin.params()["lambda_e"].get<double>() == doctest::Approx(0.2364907));
}
