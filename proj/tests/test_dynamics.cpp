#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nfc/dynamics.hpp"

using namespace nfc;
using namespace nfc::dynamics;

namespace {

tower::TowerSystem make_sys(int trunc, int d = 1) {
  auto p = params::default_params();
  p.trunc = trunc;
  p.d = d;
  return tower::TowerSystem(p);
}

}  // namespace

TEST_CASE("step moves one level up and stops at the truncation top") {
  auto sys = make_sys(4);
  Point p{4, 0};
  auto r = step(sys, p);
  REQUIRE(std::holds_alternative<Point>(r));
  CHECK(std::get<Point>(r).idx == 1);
  // idx 39 -> 40 leaves tower 3 into a spacer
  Point q{4, 39};
  auto r2 = step(sys, q);
  REQUIRE(std::holds_alternative<Point>(r2));
  Point q2 = std::get<Point>(r2);
  CHECK(q2.idx == 40);
  CHECK_FALSE(level(sys, q2, 3).has_value());
  // top of truncation
  Point top{4, sys.height(4) - 1};
  CHECK(std::holds_alternative<OutOfTruncation>(step(sys, top)));
}

TEST_CASE("iterate reports overshoot on both sides") {
  auto sys = make_sys(4);
  Point p{4, 10};
  auto r = iterate(sys, p, -10);
  REQUIRE(std::holds_alternative<Point>(r));
  CHECK(std::get<Point>(r).idx == 0);
  auto r2 = iterate(sys, p, -11);
  REQUIRE(std::holds_alternative<OutOfTruncation>(r2));
  CHECK(std::get<OutOfTruncation>(r2).overshoot == 1);
  auto r3 = iterate(sys, p, sys.height(4));
  REQUIRE(std::holds_alternative<OutOfTruncation>(r3));
  // step then back is identity away from 0
  auto fwd = std::get<Point>(step(sys, p));
  CHECK(std::get<Point>(iterate(sys, fwd, -1)).idx == p.idx);
}

TEST_CASE("level and subcolumn queries match decompose") {
  auto sys = make_sys(4);
  Point p{4, 165};
  CHECK(*level(sys, p, 2) == 4);
  CHECK(*subcolumn(sys, p, 2) == 1);
  CHECK(*level(sys, p, 3) == 4);
  CHECK(*subcolumn(sys, p, 3) == 3);
  Point q{4, 50};
  CHECK_FALSE(level(sys, q, 3).has_value());
  CHECK(*level(sys, p, 4) == 165);
  CHECK_FALSE(subcolumn(sys, p, 4).has_value());
}

TEST_CASE("lift extends the truncation without changing lower levels") {
  auto sys = make_sys(4);
  Point p{1, 0};
  Point q = lift(sys, p, 2, tower::Extension::AllMiddle);
  CHECK(q.idx == 4);  // second subcolumn of stage 1 starts at h_1
  Point r = lift(sys, p, 4, tower::Extension::AllFirst);
  CHECK(r.idx == 0);
  Point m{2, 7};
  Point lifted = lift(sys, m, 4, tower::Extension::AllMiddle);
  for (int n = 0; n <= 2; ++n) {
    auto a = sys.level_at(2, m.idx, n);
    auto b = level(sys, lifted, n);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == *b);
  }
  CHECK_THROWS(lift(sys, m, 4, LiftDigits{{1}}));  // wrong digit count
}

TEST_CASE("random points are uniform over tower-1 levels") {
  auto sys = make_sys(4);
  std::mt19937_64 rng(42);
  const int draws = 100000;
  long long counts[4] = {0, 0, 0, 0};
  long long outside = 0;
  for (int i = 0; i < draws; ++i) {
    Point p = random_point(sys, 4, rng);
    auto lv = level(sys, p, 1);
    if (lv)
      ++counts[(long long)*lv];
    else
      ++outside;
  }
  // each level of tower 1 holds 27 of the 241 tower-4 levels
  double expect = draws * 27.0 / 241.0;
  double sigma = std::sqrt(expect * (1 - 27.0 / 241.0));
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(counts[j] - expect) < 5 * sigma);
  // determinism: same seed, same draw
  std::mt19937_64 r1(7), r2(7);
  CHECK(random_point(sys, 4, r1).idx == random_point(sys, 4, r2).idx);
  // single-level tower
  std::mt19937_64 r3(1);
  CHECK(random_point(sys, 0, r3).idx == 0);
}

TEST_CASE("typicality window at a deep truncation") {
  auto p = params::default_params();
  p.trunc = 36;
  tower::TowerSystem sys(p);
  // the all-middle point sits at occurrence rank (3^m - 1)/2 everywhere
  Point mid{36, sys.embed(0, 0, 36, tower::Extension::AllMiddle)};
  auto w = xinfty_window_ok(sys, mid, 5, 5);
  CHECK(w.ok);
  // the zero point is always in the first occurrence
  Point zero{36, 0};
  CHECK_FALSE(xinfty_window_ok(sys, zero, 5, 5).ok);
  // the all-last point is always in the last occurrence
  Point last{36, sys.embed(0, 0, 36, tower::Extension::AllLast)};
  CHECK_FALSE(xinfty_window_ok(sys, last, 5, 5).ok);
  // small l: too few occurrences, every point is within 100 of an end
  CHECK_FALSE(xinfty_window_ok(sys, mid, 1, 1).ok);
}

TEST_CASE("twist applies T on G1 only") {
  auto sys = make_sys(4, 2);
  ProductPoint x = make_product({Point{4, 10}, Point{4, 90}});
  auto spec = TwistSpec::make(2, {1});
  auto r = twist(sys, x, spec);
  REQUIRE(std::holds_alternative<ProductPoint>(r));
  auto y = std::get<ProductPoint>(r);
  CHECK(y.coords[0].idx == 10);
  CHECK(y.coords[1].idx == 91);
  // twist with complementary specs composes to the full product step
  auto spec0 = TwistSpec::make(2, {0});
  auto z = std::get<ProductPoint>(twist(sys, y, spec0));
  auto s = std::get<ProductPoint>(step_product(sys, x));
  CHECK(z.coords[0].idx == s.coords[0].idx);
  CHECK(z.coords[1].idx == s.coords[1].idx);
  // G1 = everything is rejected: both classes must be nonempty
  CHECK_THROWS_AS(TwistSpec::make(2, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(TwistSpec::make(2, {}), std::invalid_argument);
}

TEST_CASE("detect_offset is the index difference") {
  CHECK(detect_offset(Point{4, 10}, Point{4, 15}) == 5);
  CHECK(detect_offset(Point{4, 7}, Point{4, 7}) == 0);
  CHECK_THROWS_AS(detect_offset(Point{4, 0}, Point{5, 0}),
                  std::invalid_argument);
}

TEST_CASE("offset pairs keep level differences where both are deep inside") {
  auto sys = make_sys(9);
  std::mt19937_64 rng(3);
  int done = 0;
  while (done < 200) {
    Point x1 = random_point(sys, 9, rng);
    Index e = (Index)uniform_u64(rng, 21) - 10;
    if (x1.idx + e < 0 || x1.idx + e >= sys.height(9)) continue;
    Point x2{9, x1.idx + e};
    for (int n = 2; n <= 7; ++n) {
      auto l1 = level(sys, x1, n);
      auto l2 = level(sys, x2, n);
      if (!l1 || !l2) continue;
      Index margin = std::min(*l1, sys.height(n) - 1 - *l1);
      if (margin > (e < 0 ? -e : e)) CHECK(*l2 - *l1 == e);
    }
    ++done;
  }
}

TEST_CASE("Rokhlin property: step climbs every tower level by level") {
  auto sys = make_sys(9);
  std::mt19937_64 rng(5);
  for (int iters = 0; iters < 100000; ++iters) {
    Point p = random_point(sys, 9, rng);
    if (p.idx + 1 >= sys.height(9)) continue;
    Point q = std::get<Point>(step(sys, p));
    for (int n = 0; n <= 9; n += 3) {
      auto lp = level(sys, p, n);
      if (lp && *lp < sys.height(n) - 1) {
        auto lq = level(sys, q, n);
        REQUIRE(lq.has_value());
        CHECK(*lq == *lp + 1);
      }
    }
  }
}

TEST_CASE("levels are monotone in the stage") {
  auto sys = make_sys(9);
  std::mt19937_64 rng(6);
  for (int iters = 0; iters < 100000; ++iters) {
    Point p = random_point(sys, 9, rng);
    Index prev = -1;
    for (int n = 0; n <= 9; ++n) {
      auto lv = level(sys, p, n);
      if (!lv) continue;
      if (prev >= 0) CHECK(*lv >= prev);
      prev = *lv;
    }
  }
}

TEST_CASE("return-time law after h_{n_l + 1} steps") {
  // points below the last occurrence and above the first level come back
  // to the same or the immediately lower level of tower n_l + 1
  auto sys = make_sys(9);
  std::mt19937_64 rng(8);
  int checked = 0;
  while (checked < 10000) {
    Point p = random_point(sys, 9, rng);
    auto lv = level(sys, p, 4);
    if (!lv || *lv == 0) continue;
    auto l8 = level(sys, p, 8);
    if (!l8) continue;
    auto rank = sys.occurrence_index(4, 8, *l8);
    if (!rank || *rank >= 80) continue;  // need a next occurrence in tower 8
    auto r = iterate(sys, p, sys.height(4));
    if (!std::holds_alternative<Point>(r)) continue;
    auto lv2 = level(sys, std::get<Point>(r), 4);
    REQUIRE(lv2.has_value());
    bool same_or_below = *lv2 == *lv || *lv2 == *lv - 1;
    CHECK(same_or_below);
    ++checked;
  }
}
