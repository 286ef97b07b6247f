#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nfc/params.hpp"

using namespace nfc;
using namespace nfc::params;

TEST_CASE("default parameter set passes every condition") {
  auto p = default_params();
  auto rep = validate(p);
  CHECK(rep.accepted);
  CHECK(rep.first_failure() == nullptr);
}

TEST_CASE("growth condition fails at k=1 for l_seq (1,2,3)") {
  auto p = default_params();
  p.l_seq = {1, 2, 3};
  auto rep = validate(p);
  CHECK_FALSE(rep.accepted);
  bool found = false;
  for (const auto& c : rep.conditions)
    if (c.name == "growth_lk" && c.index == 1) {
      found = true;
      CHECK_FALSE(c.ok);  // (8/7)^1 < 2
    }
  CHECK(found);
}

TEST_CASE("stage-gap condition is strict: n_2 = 7 fails") {
  auto p = default_params();
  p.n_seq = {3, 7, 15, 24, 35};
  auto rep = validate(p);
  CHECK_FALSE(rep.accepted);
  bool found = false;
  for (const auto& c : rep.conditions)
    if (c.name == "gap_nl" && c.index == 2) {
      found = true;
      CHECK_FALSE(c.ok);  // 7 = 3 + 4 is not > 3 + 4
    }
  CHECK(found);
}

TEST_CASE("borderline growth exponent: gap 35 passes, gap 34 fails at k=2") {
  auto p = default_params();
  p.l_seq = {1, 2, 8, 43};  // gap 35: (50/49)^35 barely clears 2
  CHECK(validate(p).accepted);
  p.l_seq = {1, 2, 8, 42};  // gap 34: (50/49)^34 < 2
  auto rep = validate(p);
  bool found = false;
  for (const auto& c : rep.conditions)
    if (c.name == "growth_lk" && c.index == 2) {
      found = true;
      CHECK_FALSE(c.ok);
    }
  CHECK(found);
}

TEST_CASE("empty sequences are rejected with no stages") {
  ConstructionParams p;
  auto rep = validate(p);
  CHECK_FALSE(rep.accepted);
  REQUIRE(rep.first_failure() != nullptr);
  CHECK(rep.first_failure()->detail == "no stages");
}

TEST_CASE("validate is deterministic") {
  auto p = default_params();
  auto a = validate(p);
  auto b = validate(p);
  REQUIRE(a.conditions.size() == b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    CHECK(a.conditions[i].ok == b.conditions[i].ok);
    CHECK(a.conditions[i].name == b.conditions[i].name);
  }
}

TEST_CASE("k_of block lookup") {
  auto p = default_params();  // l_seq = (1,2,8,44)
  CHECK(k_of(p, 1) == 0);
  CHECK(k_of(p, 5) == 1);
  CHECK(k_of(p, 8) == 2);   // boundary l = l_2
  CHECK(k_of(p, 43) == 2);
  CHECK_THROWS_AS(k_of(p, 44), std::out_of_range);  // l_seq exhausted
  CHECK_THROWS_AS(k_of(p, 0), std::out_of_range);
  for (long long l = 1; l < 44; ++l) {
    int k = k_of(p, l);
    CHECK(p.l_seq[(std::size_t)k] <= l);
    CHECK(l < p.l_seq[(std::size_t)k + 1]);
  }
}

TEST_CASE("derived constants for d=1 defaults") {
  auto p = default_params();
  auto c = constants(p);
  CHECK(c.eta == make_rat(1, 128));
  CHECK(c.p1 == 2);  // needs p1 > d = 1 and 3^p1 > 3
  CHECK(c.p2 == 6);  // 3^6 = 729 > 384 = 3/eta, 3^5 = 243 < 384
  CHECK(c.K1 == make_rat(257 * 128, 127));
  CHECK(c.K2 == 6 * c.K1);
  // invariants
  CHECK((Rat(1) - c.epsilon) * (Rat(1) - c.epsilon) > Rat(1) - c.eta);
  CHECK(make_rat(c.c_min - 1, c.c_min) > Rat(1) - c.epsilon);
  CHECK_FALSE(make_rat(c.c_min - 2, c.c_min - 1) > Rat(1) - c.epsilon);
  CHECK(pow_bigint(3, (unsigned long)c.p1) > 2 * p.d + 1);
  CHECK(c.p1 > p.d);
  CHECK(Rat(pow_bigint(3, (unsigned long)c.p2)) > Rat(3) / c.eta);
  CHECK_FALSE(Rat(pow_bigint(3, (unsigned long)(c.p2 - 1))) > Rat(3) / c.eta);
}

TEST_CASE("derived constants for d=2") {
  auto p = default_params();
  p.d = 2;
  auto c = constants(p);
  CHECK(c.eta == make_rat(1, 256));
  // minimal p with 3^p > 2d+1 = 5 and p > d = 2
  CHECK(c.p1 == 3);
  // minimal p with 3^p > 3/eta = 768: 3^6 = 729 fails, 3^7 = 2187 holds
  CHECK(c.p2 == 7);
  // K1 = (1 + 512) / (255/256) * 2 = 513*512/255
  CHECK(c.K1 == make_rat(513 * 512, 255));
  // theta1 = (1-eta) (2d/(1-eta)^{2d} + 1)^{-1}
  Rat om = Rat(1) - c.eta;
  Rat expect = om / (Rat(4) / pow_rat(om, 4) + 1);
  CHECK(c.theta1 == expect);
  CHECK(c.theta1 > 0);
  CHECK(c.theta1 < 1);
}

TEST_CASE("theta2 matches the closed form for small exponents") {
  auto p = default_params();
  auto c = constants(p);
  // theta2(M) = theta1^{7^p2 M} / (7^p2 M + 2), exact
  Rat t2 = c.theta2(1);
  BigInt e = pow_bigint(7, (unsigned long)c.p2);
  Rat expect = pow_rat(c.theta1, e.get_ui()) / Rat(e + 2);
  CHECK(t2 == expect);
  CHECK(t2 > 0);
  CHECK(t2 < 1);
  CHECK_THROWS(c.theta2(0));
}

TEST_CASE("user eta above 1/(100d) is rejected") {
  auto p = default_params();
  p.eta = make_rat(1, 90);
  CHECK_FALSE(validate(p).accepted);
  CHECK_THROWS_AS(constants(p), std::invalid_argument);
  p.eta = make_rat(1, 101);
  CHECK(validate(p).accepted);
}
