#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "nfc/dynamics.hpp"
#include "nfc/tower.hpp"
#include "oracle_tower.hpp"

using namespace nfc;
using namespace nfc::tower;

namespace {

TowerSystem make_sys(int trunc, int d = 1) {
  auto p = params::default_params();
  p.trunc = trunc;
  p.d = d;
  return TowerSystem(p);
}

}  // namespace

TEST_CASE("height recursion reproduces the frozen table") {
  auto sys = make_sys(12);
  const long long expect[] = {1,    4,     13,    40,     241,    724,  2173,
                              6520, 19561, 78244, 234733, 704200, 2112601};
  for (int n = 0; n <= 12; ++n) {
    CHECK((long long)sys.height(n) == expect[n]);
    CHECK(sys.height_big(n) == BigInt((long)expect[n]));
  }
  // h_n < h_{n+1} <= 7 h_n
  for (int n = 0; n < 12; ++n) {
    CHECK(sys.height(n) < sys.height(n + 1));
    CHECK(sys.height(n + 1) <= 7 * sys.height(n));
  }
}

TEST_CASE("stage layout segments tile tower n+1") {
  auto sys = make_sys(9);
  for (int n = 0; n < 9; ++n) {
    auto st = sys.stage(n);
    auto segs = st.segments();
    Index at = 0;
    Index sub_len = 0;
    for (const auto& s : segs) {
      CHECK(s.start == at);
      at += s.len;
      if (s.child) {
        CHECK(s.len == sys.height(n));
        sub_len += s.len;
      }
    }
    CHECK(at == sys.height(n + 1));
    CHECK(sub_len == 3 * sys.height(n));
    if (!st.special) CHECK(st.s == 0);
  }
  // normal-stage order: Sub(1), Sub(2), extra spacer, Sub(3)
  auto segs1 = sys.stage(1).segments();
  REQUIRE(segs1.size() == 4);
  CHECK(segs1[0].child);
  CHECK(segs1[1].child);
  CHECK_FALSE(segs1[2].child);
  CHECK(segs1[2].pos == SpacerPos::extra2);
  CHECK(segs1[3].child);
  // special-stage order at n = 3
  auto segs3 = sys.stage(3).segments();
  REQUIRE(segs3.size() == 7);
  CHECK(segs3[1].pos == SpacerPos::after1);
  CHECK(segs3[3].pos == SpacerPos::after2);
  CHECK(segs3[4].pos == SpacerPos::extra2);
  CHECK(segs3[6].pos == SpacerPos::after3);
  CHECK(segs3[1].len == 40);  // s = h_3, k(1) = 0
}

TEST_CASE("project classifies levels") {
  auto sys = make_sys(9);
  // normal stage 1, h_1 = 4: [0,4) t1, [4,8) t2, {8} spacer, [9,13) t3
  auto c = sys.project(1, 8);
  CHECK_FALSE(c.child);
  CHECK(c.pos == SpacerPos::extra2);
  CHECK(c.offset == 0);
  // special stage 3: Sub3 starts at 161
  c = sys.project(3, 165);
  CHECK(c.child);
  CHECK(c.j == 4);
  CHECK(c.t == 3);
  c = sys.project(3, 50);
  CHECK_FALSE(c.child);
  CHECK(c.pos == SpacerPos::after1);
  CHECK(c.offset == 10);
  CHECK_THROWS_AS(sys.project(1, 13), std::out_of_range);
}

TEST_CASE("decompose chain for idx 165 at trunc 4") {
  auto sys = make_sys(4);
  auto chain = sys.decompose(4, 165, 0);
  REQUIRE(chain.size() == 4);
  CHECK(chain[0].m == 3);
  CHECK(chain[0].cls.j == 4);
  CHECK(chain[0].t == 3);
  CHECK(chain[1].m == 2);
  CHECK(chain[1].cls.j == 4);
  CHECK(chain[1].t == 1);
  CHECK(chain[2].m == 1);
  CHECK(chain[2].cls.j == 0);
  CHECK(chain[2].t == 2);
  CHECK(chain[3].m == 0);
  CHECK(chain[3].cls.j == 0);
  CHECK(chain[3].t == 1);
}

TEST_CASE("decompose stops at the first spacer") {
  auto sys = make_sys(4);
  auto chain = sys.decompose(4, 50, 0);
  REQUIRE(chain.size() == 1);
  CHECK(chain[0].m == 3);
  CHECK_FALSE(chain[0].cls.child);
  // the all-zero point sits at the bottom of every tower
  chain = sys.decompose(4, 0, 0);
  REQUIRE(chain.size() == 4);
  for (const auto& st : chain) {
    CHECK(st.cls.child);
    CHECK(st.cls.j == 0);
    CHECK(st.t == 1);
  }
}

TEST_CASE("embed inverts decompose") {
  auto sys = make_sys(4);
  CHECK(sys.embed(3, 4, {3}) == 165);
  CHECK(sys.embed(1, 0, {2, 1, 1}) == 4);
  CHECK(sys.embed(2, 7, {1, 1}) == 7);  // all-first subcolumns keep the index
}

TEST_CASE("round trip: decompose after embed reproduces digits") {
  auto sys = make_sys(12);
  std::mt19937_64 rng(7);
  for (int iters = 0; iters < 2000; ++iters) {
    int n = (int)dynamics::uniform_u64(rng, 12);
    int N = n + 1 + (int)dynamics::uniform_u64(rng, (std::uint64_t)(12 - n));
    Index j = dynamics::uniform_index(rng, sys.height(n));
    std::vector<int> digits;
    for (int m = n; m < N; ++m)
      digits.push_back(1 + (int)dynamics::uniform_u64(rng, 3));
    Index idx = sys.embed(n, j, digits);
    auto chain = sys.decompose(N, idx, n);
    REQUIRE((int)chain.size() == N - n);
    for (int i = 0; i < N - n; ++i) {
      CHECK(chain[(std::size_t)i].cls.child);
      CHECK(*chain[(std::size_t)i].t == digits[(std::size_t)(N - n - 1 - i)]);
    }
    CHECK(chain.back().cls.j == j);
    // monotone: j_{m+1} >= j_m along the chain
    Index upper = idx;
    for (const auto& st : chain) {
      CHECK(st.cls.j <= upper);
      upper = st.cls.j;
    }
  }
}

TEST_CASE("successor property of the projections") {
  auto sys = make_sys(10);
  std::mt19937_64 rng(11);
  for (int iters = 0; iters < 5000; ++iters) {
    int n = (int)dynamics::uniform_u64(rng, 10);
    Index j = dynamics::uniform_index(rng, sys.height(n + 1));
    auto c = sys.project(n, j);
    if (c.child && c.j <= sys.height(n) - 2) {
      REQUIRE(j <= sys.height(n + 1) - 2);
      auto c2 = sys.project(n, j + 1);
      CHECK(c2.child);
      CHECK(c2.j == c.j + 1);
    }
  }
}

TEST_CASE("occurrence ranks are ternary digit numbers") {
  auto sys = make_sys(4);
  auto r = sys.occurrence_index(3, 4, 165);
  REQUIRE(r.has_value());
  CHECK(*r == 2);  // t_3 = 3
  r = sys.occurrence_index(0, 4, 0);
  REQUIRE(r.has_value());
  CHECK(*r == 0);
  CHECK_FALSE(sys.occurrence_index(3, 4, 50).has_value());
  // rank of the all-last point is 3^{N-n} - 1
  Index top = sys.embed(1, 3, {3, 3, 3});
  auto rr = sys.occurrence_index(1, 4, top);
  REQUIRE(rr.has_value());
  CHECK(*rr == 26);
}

TEST_CASE("occurrence gaps between consecutive towers are 0 or 1 spacer") {
  // for l >= 2 and n_{l-1}+1 <= n <= n_l - 1, consecutive occurrences of
  // tower n inside tower n_l are separated by 0 or 1 levels
  auto sys = make_sys(9);
  for (int n = 4; n <= 7; ++n) {
    int m = 8;  // n_2
    long long count = 1;
    for (int i = n; i < m; ++i) count *= 3;
    Index prev_end = -1;
    for (long long rank = 0; rank < count; ++rank) {
      std::vector<int> digits;
      long long r = rank;
      for (int i = n; i < m; ++i) {
        digits.push_back((int)(r % 3) + 1);
        r /= 3;
      }
      Index start = sys.embed(n, 0, digits);
      if (prev_end >= 0) {
        Index gap = start - prev_end - 1;
        CHECK(gap >= 0);
        CHECK(gap <= 1);
      }
      prev_end = start + sys.height(n) - 1;
    }
  }
}

TEST_CASE("level census counts agree with the oracle tables") {
  auto p = params::default_params();
  auto sys = make_sys(6);
  test_oracle::OracleTower oracle(p, 6);
  REQUIRE(oracle.height() == (long long)sys.height(6));
  for (int n = 0; n <= 6; ++n) {
    std::vector<long long> counts((std::size_t)(long long)sys.height(n), 0);
    for (long long idx = 0; idx < oracle.height(); ++idx) {
      auto jn = oracle.level(idx, n);
      auto mine = sys.level_at(6, idx, n);
      REQUIRE(jn.has_value() == mine.has_value());
      if (jn) {
        CHECK((long long)*mine == *jn);
        ++counts[(std::size_t)*jn];
      }
    }
    BigInt expect = sys.level_census_count(n, 6);
    for (long long c : counts) CHECK(BigInt((long)c) == expect);
  }
}

TEST_CASE("subcolumns agree with the oracle tables") {
  auto p = params::default_params();
  auto sys = make_sys(5);
  test_oracle::OracleTower oracle(p, 5);
  for (long long idx = 0; idx < oracle.height(); ++idx)
    for (int n = 0; n < 5; ++n) {
      auto a = oracle.subcolumn(idx, n);
      auto b = sys.subcolumn_at(5, idx, n);
      REQUIRE(a.has_value() == b.has_value());
      if (a) CHECK(*a == *b);
    }
}

TEST_CASE("fake levels live in the three spacer blocks") {
  auto sys = make_sys(9);
  auto f = sys.fake_level(1, 50);
  REQUIRE(f.has_value());
  CHECK(f->first == SpacerPos::after1);
  CHECK(f->second == 10);
  CHECK_FALSE(sys.fake_level(1, 160).has_value());  // the lone extra spacer
  CHECK_FALSE(sys.fake_level(1, 10).has_value());   // inside a subcolumn
  // every fake level is below h_{n'}
  for (Index j = 0; j < sys.height(4); ++j) {
    auto fl = sys.fake_level(1, j);
    if (fl) CHECK(fl->second < sys.height(3));
  }
}

TEST_CASE("tower measures grow and match h_n 3^-n") {
  auto sys = make_sys(9);
  CHECK(sys.measure_of_tower(0) == Rat(1));
  CHECK(sys.measure_of_tower(4) == make_rat(241, 81));
  for (int n = 0; n < 9; ++n)
    CHECK(sys.measure_of_tower(n + 1) >= sys.measure_of_tower(n));
  // growth at the special stage: mu(C_4)/mu(C_3) >= 1 + 7^0 = 2
  CHECK(sys.measure_of_tower(4) / sys.measure_of_tower(3) >= Rat(2));
}
