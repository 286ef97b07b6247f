#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfc/dynamics.hpp"
#include "nfc/interval.hpp"

namespace nfc::crossings {

using dynamics::Point;
using dynamics::ProductPoint;
using params::DerivedConstants;
using tower::TowerSystem;

// Largest window of orbit shifts j with every coordinate index in range.
Interval valid_window(const TowerSystem& sys, const ProductPoint& x);

// All coordinates of (T^xd)^j x in tower n?
bool all_in_tower(const TowerSystem& sys, const ProductPoint& x, int n,
                  long long j);

// F = {j in window : all coordinates in C_n}, as interval pieces.
IntervalSet visit_set(const TowerSystem& sys, const ProductPoint& x, int n,
                      Interval window);

// Count of F over one interval (exact).
long long gamma_count(const TowerSystem& sys, const ProductPoint& x, int n,
                      Interval interval);

// Joint-membership bitmap over a window; gamma queries in O(span/64).
class VisitBitmap {
 public:
  VisitBitmap(const TowerSystem& sys, const ProductPoint& x, int n,
              Interval window);
  long long count(Interval I) const;  // |F cap I cap window|
  Interval window() const { return window_; }

 private:
  Interval window_;
  std::vector<std::uint64_t> bits_;
  std::vector<long long> prefix_;  // per-word popcount prefix
};

struct Crossing {
  int n = 0;
  Interval interval;
  std::vector<int> tvec;  // per-coordinate t_n; empty when n == trunc
  bool substantial = false;
  bool synchronized = false;
  bool partial = false;  // clipped by the window with maximality undecided
};

// Maximal intervals where all coordinates stay in tower n with constant
// subcolumns, clipped to the window. A clipped run is only marked partial
// when its true endpoint is genuinely undecidable: runs whose edge
// coordinate sits at level 0 (left) or h_n - 1 (right) cannot extend, and
// one step beyond the window is examined when the truncation allows it.
std::vector<Crossing> extract_crossings(const TowerSystem& sys,
                                        const ProductPoint& x, int n,
                                        Interval window, const Rat& eta);

// The n-crossing containing shift j0, or empty if some coordinate is
// outside tower n there. O(d): each coordinate's occurrence block is a
// contiguous index range.
std::optional<Interval> crossing_containing(const TowerSystem& sys,
                                            const ProductPoint& x, int n,
                                            long long j0);

// Aligned intervals {m h_n, ..., (m+1) h_n - 1} meeting the range.
std::vector<Interval> n_intervals(const TowerSystem& sys, int n,
                                  Interval range);

// Classification of the shift r * h_{n'} (n' = n_l - k(l)): every
// coordinate lands in tower n', in the fake tower (one of the three
// spacer blocks of stage n_l), or elsewhere.
struct ShiftClass {
  enum Kind { True, Fake, Other } kind = True;
  std::vector<int> fake_coords;   // coordinates in the fake tower
  std::vector<int> other_coords;  // in neither (e.g. the lone extra spacer)
};
ShiftClass classify_crossing_at(const TowerSystem& sys, const ProductPoint& x,
                                long long ell, long long r);

// Smallest n in [n_lo, n_hi] such that the shifts {h_n, ..., 2 h_n} stay
// inside one crossing_stage-crossing. The search engine behind
// find_n_good, usable with any candidate range.
std::optional<int> first_good_level(const TowerSystem& sys,
                                    const ProductPoint& x, int crossing_stage,
                                    int n_lo, int n_hi);

struct NGoodResult {
  bool preconditions_ok = false;
  std::string precondition_detail;
  int n_lo = 0, n_hi = 0;
  std::optional<int> n_good;
};
// Candidate range [n_l - k(l) + p1 + 2 p2, ... + d]; requires the range
// below n_l and within the truncation.
NGoodResult find_n_good(const TowerSystem& sys, const DerivedConstants& dc,
                        const ProductPoint& x, long long ell);

// Gamma-ratio check over consecutive aligned n-intervals inside the
// n_l-crossing through 0, with visits counted at tower n_{lbar}.
struct Theta1Pair {
  Interval i1, i2;
  long long g1 = 0, g2 = 0;
  Rat ratio;
  bool ok = false;
  bool boundary = false;  // i2 clipped at the crossing edge (upper check only)
};
struct Theta1Report {
  int n = 0;
  long long ell = 0, ellbar = 0;
  Rat theta1;
  bool hyp_n_range = false;      // n_{l-1} - k(l-1) + p1 <= n < n_l
  bool hyp_ell = false;          // l > lbar + 1
  bool hyp_choice_of_lb = false; // K1 c/h_{n_lbar} + K2/3^lbar < epsilon
  bool hyp_newcondlb = false;    // (K1 + K2)/3^lbar < eta
  Interval crossing;             // scanned n_l-crossing (clipped to window)
  std::vector<Theta1Pair> pairs;
  long long failures = 0;
  std::optional<Rat> min_ratio, max_ratio;
  std::string error;  // nonempty when no qualifying pair
};
Theta1Report verify_theta1(const TowerSystem& sys, const DerivedConstants& dc,
                           const ProductPoint& x, int n, long long ell,
                           long long ellbar, Interval window);

// Exact visit density and small-crossing proportion over an interval,
// with the bound checks and every hypothesis flag reported.
struct CrossingStatsReport {
  long long ellbar = 0, ell = 0;
  long long c = 0;
  Interval I;
  std::vector<std::string> precondition_violations;
  long long visits = 0;           // |F cap I|
  Rat density;                    // visits / |I|
  Rat density_bound;              // (1-eta)^{2l}
  bool density_ok = false;
  long long small_visits = 0;     // visits in crossings of true size <= c
  Rat proportion;                 // small_visits / visits
  Rat proportion_bound;           // K1 c/h_{n_lbar} + K2/3^lbar
  bool proportion_ok = false;
  bool hyp_cs1 = false, hyp_cs2 = false;
  bool hyp_choice_of_lb = false, hyp_newcondlb = false;
  bool hypothesis_ok = false;     // all of the above
};
CrossingStatsReport verify_crossing_stats(const TowerSystem& sys,
                                          const DerivedConstants& dc,
                                          const ProductPoint& x,
                                          long long ellbar, long long ell,
                                          long long c, Interval I);

// Coverage of the centered window I_n by substantial n-crossings at
// n = n_{l-1}, with the implicit largeness hypothesis reported.
struct SubstantialCoverage {
  int n = 0;
  Interval window;                // I_n
  Rat coverage;                   // covered / h_n
  Rat coverage_bound;             // 1 - (d+2) eta
  bool coverage_ok = false;
  bool hypothesis_ok = false;     // 1/3^{k(l-1)} < eta/(2d)
  long long substantial_count = 0;
};
SubstantialCoverage substantial_coverage(const TowerSystem& sys,
                                         const DerivedConstants& dc,
                                         const ProductPoint& x, long long ell);

// Fake-tower extensions used by the shift classification: level and
// subcolumn of a point inside the real tower n, or inside the copy of
// tower n carried by the spacer blocks of stage n_l.
struct ExtendedPos {
  bool fake = false;
  Index level = 0;
  std::optional<int> t;  // structural subcolumn, needs n < carrier stage
};
std::optional<ExtendedPos> extended_level(const TowerSystem& sys,
                                          long long ell, Point p, int n);

}  // namespace nfc::crossings
