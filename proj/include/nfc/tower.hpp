#pragma once

#include <optional>
#include <vector>

#include "nfc/params.hpp"

namespace nfc::tower {

using params::ConstructionParams;

enum class SpacerPos { after1, after2, extra2, after3 };

const char* spacer_pos_name(SpacerPos p);

// Where a tower-(n+1) level sits relative to tower n: inside a subcolumn
// copy (Child, with the owning subcolumn t) or in a spacer block.
struct LevelClass {
  bool child = false;
  Index j = 0;          // child level in [0, h_n)
  int t = 0;            // subcolumn 1..3 when child
  SpacerPos pos = SpacerPos::extra2;
  Index offset = 0;     // offset within the spacer block when !child
};

// One entry of a decompose chain.
struct StageStep {
  int m;                       // stage
  LevelClass cls;              // project(m, j_{m+1})
  std::optional<int> t;        // t_m, empty at a spacer
};

enum class Extension { AllMiddle, AllFirst, AllLast };

// Per-stage geometry of tower n+1 in tower-(n+1) level coordinates.
// Both stage kinds share one layout: Sub1 [0,h), after1 [h,h+s),
// Sub2 [h+s,2h+s), after2 [2h+s,2h+2s), extra2 [2h+2s,2h+2s+1),
// Sub3 [2h+2s+1,3h+2s+1), after3 [3h+2s+1,3h+3s+1); a normal stage is
// s = 0 (the three s-blocks vanish), a special stage n = n_l has
// s = h_{n-k(l)}. The extra spacer above the second subcolumn sits above
// the s-block, which makes each s-block an exact copy of the fake tower.
struct StageLayout {
  int n = 0;
  bool special = false;
  long long ell = 0;   // l with n = n_l when special
  Index h = 0;         // h_n
  Index s = 0;         // spacer block length
  Index height_next() const { return 3 * h + 3 * s + 1; }

  struct Segment {
    bool child;
    int t;             // 1..3 when child
    SpacerPos pos;     // when !child
    Index start;
    Index len;
  };
  std::vector<Segment> segments() const;
};

// Immutable tower system for one validated parameter set: heights,
// layouts, and every pure geometric query. Safe to share across threads.
class TowerSystem {
 public:
  TowerSystem(ConstructionParams params);

  const ConstructionParams& params() const { return params_; }
  int trunc() const { return params_.trunc; }

  // h_n for 0 <= n <= trunc; exact and 128-bit mirrors.
  const BigInt& height_big(int n) const;
  Index height(int n) const;

  bool is_special(int n) const;          // n in n_seq
  long long special_ell(int n) const;    // l with n = n_l (pre: special)
  Index spacer_len(int n) const;         // s for stage n (0 when normal)
  StageLayout stage(int n) const;        // pre: 0 <= n < trunc

  // p_n refined with spacer identity. Pre: 0 <= j < h_{n+1}.
  LevelClass project(int n, Index j) const;

  // Chain j_m = p_m(j_{m+1}) from stage N-1 down to n_lo, stopping at the
  // first spacer (all lower stages are then outside).
  std::vector<StageStep> decompose(int N, Index j_N, int n_lo = 0) const;

  // Inverse of decompose for a digit list t_n..t_{N-1}.
  Index embed(int n, Index j_n, const std::vector<int>& digits) const;
  Index embed(int n, Index j_n, int N, Extension ext) const;

  // Level of j in tower n given j is a tower-N level; empty = outside.
  std::optional<Index> level_at(int N, Index j, int n) const;
  // Subcolumn t_n; needs n < N and the point inside tower n.
  std::optional<int> subcolumn_at(int N, Index j, int n) const;

  // Rank of the occurrence of tower n inside tower N that contains j,
  // as the ternary integer with digits (t_{N-1}-1, ..., t_n-1), most
  // significant first; empty when j is outside tower n.
  std::optional<BigInt> occurrence_index(int n, int N, Index j) const;

  // Number of tower-N levels inside each level of tower n (uniform), via
  // the subdivision recursion rather than the closed form.
  BigInt level_census_count(int n, int N) const;

  // Fake tower n' = n_l - k(l): each s-block of stage n_l is one copy.
  // Returns the block and the level within it; the lone extra spacer and
  // subcolumn levels return empty. Pre: 0 <= j < h_{n_l + 1}.
  std::optional<std::pair<SpacerPos, Index>> fake_level(long long ell,
                                                        Index j) const;

  Rat measure_of_tower(int n) const;  // h_n * 3^-n

 private:
  ConstructionParams params_;
  std::vector<BigInt> heights_big_;
  std::vector<Index> heights_;
  std::vector<long long> special_ell_;  // 0 when normal
  std::vector<Index> spacer_;           // s per stage
};

}  // namespace nfc::tower
