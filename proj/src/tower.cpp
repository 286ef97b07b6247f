#include "nfc/tower.hpp"

#include <stdexcept>

namespace nfc::tower {

const char* spacer_pos_name(SpacerPos p) {
  switch (p) {
    case SpacerPos::after1: return "after1";
    case SpacerPos::after2: return "after2";
    case SpacerPos::extra2: return "extra2";
    case SpacerPos::after3: return "after3";
  }
  return "?";
}

std::vector<StageLayout::Segment> StageLayout::segments() const {
  std::vector<Segment> v;
  Index at = 0;
  auto sub = [&](int t) {
    v.push_back({true, t, SpacerPos::extra2, at, h});
    at += h;
  };
  auto sp = [&](SpacerPos pos, Index len) {
    if (len > 0) v.push_back({false, 0, pos, at, len});
    at += len;
  };
  sub(1);
  sp(SpacerPos::after1, s);
  sub(2);
  sp(SpacerPos::after2, s);
  sp(SpacerPos::extra2, 1);
  sub(3);
  sp(SpacerPos::after3, s);
  return v;
}

TowerSystem::TowerSystem(ConstructionParams params) : params_(std::move(params)) {
  auto rep = params::validate(params_);
  if (!rep.accepted) {
    auto* f = rep.first_failure();
    throw std::invalid_argument("TowerSystem: invalid params (" +
                                (f ? f->name : std::string("?")) + ")");
  }
  int N = params_.trunc;
  heights_big_.assign(N + 1, BigInt(0));
  special_ell_.assign(N + 1, 0);
  spacer_.assign(N + 1, 0);
  heights_big_[0] = 1;
  for (std::size_t i = 0; i < params_.n_seq.size(); ++i) {
    long long n = params_.n_seq[i];
    if (n <= N) special_ell_[n] = (long long)i + 1;
  }
  BigInt lim = BigInt(1) << 126;
  for (int n = 0; n < N; ++n) {
    BigInt s = 0;
    if (special_ell_[n] != 0) {
      long long ell = special_ell_[n];
      int k = params::k_of(params_, ell);
      s = heights_big_[n - k];
    }
    heights_big_[n + 1] = 3 * heights_big_[n] + 3 * s + 1;
    if (heights_big_[n + 1] >= lim)
      throw std::out_of_range("TowerSystem: heights exceed 128-bit range");
  }
  heights_.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    heights_[n] = index_from_bigint(heights_big_[n]);
    if (n < N && special_ell_[n] != 0) {
      int k = params::k_of(params_, special_ell_[n]);
      spacer_[n] = heights_[n - k];
    }
  }
}

const BigInt& TowerSystem::height_big(int n) const {
  if (n < 0 || n > params_.trunc)
    throw std::out_of_range("height: stage out of range");
  return heights_big_[n];
}

Index TowerSystem::height(int n) const {
  if (n < 0 || n > params_.trunc)
    throw std::out_of_range("height: stage out of range");
  return heights_[n];
}

bool TowerSystem::is_special(int n) const {
  return n >= 0 && n <= params_.trunc && special_ell_[n] != 0;
}

long long TowerSystem::special_ell(int n) const {
  if (!is_special(n)) throw std::invalid_argument("special_ell: normal stage");
  return special_ell_[n];
}

Index TowerSystem::spacer_len(int n) const {
  if (n < 0 || n >= params_.trunc)
    throw std::out_of_range("spacer_len: stage out of range");
  return spacer_[n];
}

StageLayout TowerSystem::stage(int n) const {
  if (n < 0 || n >= params_.trunc)
    throw std::out_of_range("stage: out of range");
  StageLayout st;
  st.n = n;
  st.special = special_ell_[n] != 0;
  st.ell = special_ell_[n];
  st.h = heights_[n];
  st.s = spacer_[n];
  return st;
}

LevelClass TowerSystem::project(int n, Index j) const {
  if (n < 0 || n >= params_.trunc)
    throw std::out_of_range("project: stage out of range");
  const Index h = heights_[n];
  const Index s = spacer_[n];
  if (j < 0 || j >= 3 * h + 3 * s + 1)
    throw std::out_of_range("project: level out of range");
  LevelClass c;
  // Sub1 | after1 | Sub2 | after2 | extra2 | Sub3 | after3
  if (j < h) {
    c.child = true; c.j = j; c.t = 1; return c;
  }
  j -= h;
  if (j < s) {
    c.pos = SpacerPos::after1; c.offset = j; return c;
  }
  j -= s;
  if (j < h) {
    c.child = true; c.j = j; c.t = 2; return c;
  }
  j -= h;
  if (j < s) {
    c.pos = SpacerPos::after2; c.offset = j; return c;
  }
  j -= s;
  if (j < 1) {
    c.pos = SpacerPos::extra2; c.offset = 0; return c;
  }
  j -= 1;
  if (j < h) {
    c.child = true; c.j = j; c.t = 3; return c;
  }
  j -= h;
  c.pos = SpacerPos::after3; c.offset = j;
  return c;
}

std::vector<StageStep> TowerSystem::decompose(int N, Index j_N, int n_lo) const {
  if (N < 0 || N > params_.trunc || n_lo < 0 || n_lo > N)
    throw std::out_of_range("decompose: stage out of range");
  if (j_N < 0 || j_N >= heights_[N])
    throw std::out_of_range("decompose: level out of range");
  std::vector<StageStep> chain;
  Index j = j_N;
  for (int m = N - 1; m >= n_lo; --m) {
    LevelClass c = project(m, j);
    StageStep st;
    st.m = m;
    st.cls = c;
    if (c.child) st.t = c.t;
    chain.push_back(st);
    if (!c.child) break;
    j = c.j;
  }
  return chain;
}

Index TowerSystem::embed(int n, Index j_n, const std::vector<int>& digits) const {
  if (n < 0 || n > params_.trunc) throw std::out_of_range("embed: stage");
  if (j_n < 0 || j_n >= heights_[n]) throw std::out_of_range("embed: level");
  Index j = j_n;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    int m = n + (int)i;
    if (m >= params_.trunc) throw std::out_of_range("embed: digits past trunc");
    int t = digits[i];
    if (t < 1 || t > 3) throw std::invalid_argument("embed: digit not in 1..3");
    const Index h = heights_[m];
    const Index s = spacer_[m];
    if (t == 2) j += h + s;
    else if (t == 3) j += 2 * (h + s) + 1;
  }
  return j;
}

Index TowerSystem::embed(int n, Index j_n, int N, Extension ext) const {
  int t = ext == Extension::AllMiddle ? 2 : (ext == Extension::AllFirst ? 1 : 3);
  std::vector<int> digits((std::size_t)(N - n), t);
  return embed(n, j_n, digits);
}

std::optional<Index> TowerSystem::level_at(int N, Index j, int n) const {
  if (N < 0 || N > params_.trunc || n < 0 || n > N)
    throw std::out_of_range("level_at: stage out of range");
  if (j < 0 || j >= heights_[N])
    throw std::out_of_range("level_at: level out of range");
  for (int m = N - 1; m >= n; --m) {
    const Index h = heights_[m];
    const Index s = spacer_[m];
    if (j < h) continue;                       // t = 1
    Index r = j - h - s;
    if (r >= 0 && r < h) { j = r; continue; }  // t = 2
    r = j - 2 * (h + s) - 1;
    if (r >= 0 && r < h) { j = r; continue; }  // t = 3
    return std::nullopt;
  }
  return j;
}

std::optional<int> TowerSystem::subcolumn_at(int N, Index j, int n) const {
  if (n >= N) return std::nullopt;
  auto jn1 = level_at(N, j, n + 1);
  if (!jn1) return std::nullopt;
  LevelClass c = project(n, *jn1);
  if (!c.child) return std::nullopt;
  return c.t;
}

std::optional<BigInt> TowerSystem::occurrence_index(int n, int N, Index j) const {
  if (N < 0 || N > params_.trunc || n < 0 || n > N)
    throw std::out_of_range("occurrence_index: stage out of range");
  auto chain = decompose(N, j, n);
  BigInt rank = 0;
  // chain runs m = N-1 .. n; most significant digit first.
  for (const auto& st : chain) {
    if (!st.cls.child) return std::nullopt;
    rank = rank * 3 + (st.cls.t - 1);
  }
  if ((int)chain.size() != N - n) return std::nullopt;
  return rank;
}

BigInt TowerSystem::level_census_count(int n, int N) const {
  if (n < 0 || N > params_.trunc || n > N)
    throw std::out_of_range("level_census_count: stage out of range");
  BigInt c = 1;
  for (int m = n; m < N; ++m) c *= 3;  // three subcolumn copies per stage
  return c;
}

std::optional<std::pair<SpacerPos, Index>> TowerSystem::fake_level(
    long long ell, Index j) const {
  if (ell < 1 || ell > (long long)params_.n_seq.size())
    throw std::out_of_range("fake_level: ell out of range");
  int n = (int)params_.n_seq[(std::size_t)ell - 1];
  if (n >= params_.trunc)
    throw std::out_of_range("fake_level: stage n_l not below trunc");
  LevelClass c = project(n, j);
  if (c.child || c.pos == SpacerPos::extra2) return std::nullopt;
  return std::make_pair(c.pos, c.offset);
}

Rat TowerSystem::measure_of_tower(int n) const {
  return make_rat(height_big(n), pow_bigint(3, (unsigned long)n));
}

}  // namespace nfc::tower
