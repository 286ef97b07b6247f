#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nfc/dynamics.hpp"
#include "nfc/interval.hpp"

namespace nfc::hierarchy {

using tower::TowerSystem;

// Abstract hierarchy parameters. d and eta are free here (the hierarchy
// is independent of the construction); the two smallness conditions are
// computed as flags, not enforced, so orbit-derived sequences can still
// be examined.
struct OrderParams {
  int d = 1;
  Rat eta;
  std::vector<long long> c;  // c_1, c_2, ...
  std::vector<long long> s;  // s_1, s_2, ...

  Rat K1() const { return (Rat(1) + 2 / eta) / (Rat(1) - eta) * d; }
};

struct OrderParamsCheck {
  bool cs1_ok = true;  // s_l/c_l < (1/d) (eta/(eta+1)) eta for all l
  bool cs2_ok = true;  // c_l/c_{l+1} < eta/K1 for all l with both present
  long long cs1_fail = -1, cs2_fail = -1;  // first failing index (1-based)
};
OrderParamsCheck check_params(const OrderParams& p);

struct PieceHole {
  bool piece = false;
  Interval iv;
};
// Pieces = maximal runs of F inside I, holes = maximal runs of I\F;
// alternating, tiling I.
std::vector<PieceHole> pieces_and_holes(const IntervalSet& F, Interval I);

struct OrderDiag {
  bool ok = false;
  int level = 0;        // level of the first failure
  std::string what;     // clause that failed
  Interval where;       // offending hole/piece
};

// Order-l check with explicit witnesses: witnesses[0] is the coarse set
// for level l, witnesses[1] for level l-1, ..., witnesses[l-2] for
// level 2 (order 1 needs none).
OrderDiag check_order(const IntervalSet& F, Interval I, int ell,
                      const OrderParams& p,
                      const std::vector<IntervalSet>& witnesses);

// Canonical orbit witnesses: the visit sets of one coordinate to the
// intermediate towers n_{lbar+m-1}, coarsest first. Fails when the
// coordinate does not climb into tower n_{lbar+ell} along I.
struct OrbitOrderInstance {
  IntervalSet F;                          // visits to tower n_lbar
  std::vector<IntervalSet> witnesses;     // levels ell .. 2
  OrderParams params;                     // induced c/s with the given eta/d
  bool climb_ok = false;
};
OrbitOrderInstance witnesses_from_orbit(const TowerSystem& sys,
                                        dynamics::Point xi, long long ellbar,
                                        int ell, Interval I, const Rat& eta);

struct LemmaBoundsReport {
  std::vector<std::string> precondition_violations;
  long long intersection = 0;   // |F cap I|
  Rat density;
  Rat density_bound;            // (1-eta)^{2l}
  bool density_ok = false;
  long long small_mass = 0;     // points of F cap I in pieces of size <= c
  Rat proportion;
  Rat proportion_bound;         // K1 (c/c_1 + sum c_m/c_{m+1} (1-eta)^{-2m-2})
  bool proportion_ok = false;
  OrderParamsCheck flags;
};
LemmaBoundsReport check_lemma_bounds(const std::vector<IntervalSet>& F,
                                     Interval I, int ell,
                                     const OrderParams& p, long long c);

struct SyntheticInstance {
  IntervalSet F;
  std::vector<IntervalSet> witnesses;  // levels ell..2
};
// Random order-l set on I, certified by construction: at each level the
// generator lays pieces of size >= c_m separated by holes of size <= s_m
// and recurses into the pieces. Too-tight params degenerate to F = I.
SyntheticInstance random_order_instance(int ell, const OrderParams& p,
                                        Interval I, std::mt19937_64& rng);

}  // namespace nfc::hierarchy
