#pragma once

// Test-only oracle: materializes the cutting-and-stacking construction as
// literal level tables, by list concatenation. Deliberately independent of
// the arithmetic layout code in nfc::tower; only usable while h_N stays
// small enough to hold the tables in memory.

#include <optional>
#include <stdexcept>
#include <vector>

#include "nfc/params.hpp"

namespace nfc::test_oracle {

struct OracleLevel {
  // j_n for every n <= N; -1 encodes "outside tower n" (a spacer).
  std::vector<long long> j;
  // t_n for every n < N; -1 when outside tower n.
  std::vector<int> t;
};

class OracleTower {
 public:
  OracleTower(const params::ConstructionParams& p, int N) : N_(N) {
    // stage 0: one level, inside tower 0 at level 0
    std::vector<OracleLevel> cur(1);
    cur[0].j = {0};
    cur[0].t = {};
    for (int n = 0; n < N; ++n) {
      long long s = 0;
      for (std::size_t i = 0; i < p.n_seq.size(); ++i)
        if (p.n_seq[i] == n)
          s = height_at(p, n - params::k_of(p, (long long)i + 1));
      std::vector<OracleLevel> next;
      auto copy_sub = [&](int t) {
        for (const auto& lvl : cur) {
          OracleLevel nl = lvl;
          nl.t.push_back(lvl.j[(std::size_t)n] >= 0 ? t : -1);
          next.push_back(nl);
        }
      };
      auto spacers = [&](long long count) {
        for (long long i = 0; i < count; ++i) {
          OracleLevel nl;
          nl.j.assign((std::size_t)n + 1, -1);
          nl.t.assign((std::size_t)n + 1, -1);
          next.push_back(nl);
        }
      };
      copy_sub(1);
      spacers(s);
      copy_sub(2);
      spacers(s);
      spacers(1);
      copy_sub(3);
      spacers(s);
      for (std::size_t j = 0; j < next.size(); ++j)
        next[j].j.push_back((long long)j);
      cur = std::move(next);
    }
    levels_ = std::move(cur);
  }

  long long height() const { return (long long)levels_.size(); }

  // j_n of tower-N level idx, or empty when outside.
  std::optional<long long> level(long long idx, int n) const {
    long long v = levels_[(std::size_t)idx].j[(std::size_t)n];
    if (v < 0) return std::nullopt;
    return v;
  }

  std::optional<int> subcolumn(long long idx, int n) const {
    if (n >= N_) return std::nullopt;
    int v = levels_[(std::size_t)idx].t[(std::size_t)n];
    if (v < 0) return std::nullopt;
    return v;
  }

 private:
  static long long height_at(const params::ConstructionParams& p, int n) {
    // independent height recursion for the spacer count
    std::vector<long long> h{1};
    for (int m = 0; m < n; ++m) {
      long long s = 0;
      for (std::size_t i = 0; i < p.n_seq.size(); ++i)
        if (p.n_seq[i] == m) s = h[(std::size_t)(m - params::k_of(p, (long long)i + 1))];
      h.push_back(3 * h.back() + 3 * s + 1);
    }
    return h[(std::size_t)n];
  }

  int N_;
  std::vector<OracleLevel> levels_;
};

}  // namespace nfc::test_oracle
