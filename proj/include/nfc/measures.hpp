#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfc/dynamics.hpp"
#include "nfc/interval.hpp"

namespace nfc::measures {

using dynamics::ProductPoint;
using dynamics::TwistSpec;
using tower::TowerSystem;

// A product of d levels of tower n. Boxes on one n-diagonal differ by a
// simultaneous shift of all entries; the canonical diagonal id subtracts
// the minimum entry.
struct BoxKey {
  int n = 0;
  std::vector<Index> levels;
};

std::vector<Index> diagonal_id(const BoxKey& key);

// Empirical measure gamma_J: the counting measure of the orbit positions
// (T^xd)^j x for j in J. Positions are implicit (base index + j); every
// count is produced by one streaming pass, so memory stays independent of
// |J|.
struct EmpiricalMeasure {
  ProductPoint base;
  IntervalSet support;  // sorted disjoint intervals of shifts
};

EmpiricalMeasure empirical(const TowerSystem& sys, const ProductPoint& x,
                           IntervalSet J);

// Exact box counts at level n, keyed by the level vector.
using BoxHistogram = std::map<std::vector<long long>, long long>;
BoxHistogram box_histogram(const TowerSystem& sys, const EmpiricalMeasure& g,
                           int n);

long long count_box(const TowerSystem& sys, const EmpiricalMeasure& g,
                    const BoxKey& key);
long long count_Cn(const TowerSystem& sys, const EmpiricalMeasure& g, int n);
// count_box / count_Cn; throws on zero mass.
Rat ratio(const TowerSystem& sys, const EmpiricalMeasure& g,
          const BoxKey& key);

// max over n-boxes of |ratio difference|; throws on zero mass on either
// side.
Rat box_ratio_distance(const TowerSystem& sys, const EmpiricalMeasure& g1,
                       const EmpiricalMeasure& g2, int n);

// max over n-diagonals of (max box count - min box count), minimum taken
// over every box of the diagonal including uncharged ones.
long long diagonal_spread(const TowerSystem& sys, const EmpiricalMeasure& g,
                          int n);

// gamma(boundary of C_n^d) / gamma(C_n^d); boundary = some coordinate
// level in {0, h_n - 1}.
Rat edge_ratio(const TowerSystem& sys, const EmpiricalMeasure& g, int n);

Rat hopf_ratio(const TowerSystem& sys, const ProductPoint& x,
               const BoxKey& box, int n, const IntervalSet& J);

// Fraction of C_n^d mass on boxes with levels (j, j+e2, ..., j+ed).
Rat graph_support_fraction(const TowerSystem& sys, const EmpiricalMeasure& g,
                           int n, const std::vector<long long>& offsets);

// Smallest margin to the tower edge over all charged boxes at level n:
// min over counted j and coordinates of min(level, h_n-1-level). Empty
// when there is no mass in C_n^d.
std::optional<Index> interior_margin(const TowerSystem& sys,
                                     const EmpiricalMeasure& g, int n);

// max over all n-boxes of |ratio - h_n^{-d}| against the normalized
// product measure, which weights every box equally.
Rat product_distance(const TowerSystem& sys, const EmpiricalMeasure& g, int n);

// One streaming pass reporting product_distance at the given window
// prefixes [0, sizes[i]) of shifts from x.
std::vector<Rat> product_distance_trend(const TowerSystem& sys,
                                        const ProductPoint& x, int n,
                                        const std::vector<long long>& sizes);

struct TwistMismatch {
  int m = 0;
  std::vector<long long> box;  // B in Omega_m
  long long count_J = 0;       // gamma_J(B)
  long long count_Jp = 0;      // gamma_J'(S^-1 B)
};
struct TwistReport {
  bool ok = false;
  long long boxes_checked = 0;
  std::optional<TwistMismatch> first_mismatch;
};
// Checks gamma_J'(S^-1 B) = gamma_J(B) for every m <= m_max and every
// m-box B inside Omega_m charged on either side; zero-zero boxes skipped.
TwistReport verify_twist_invariance(const TowerSystem& sys,
                                    const ProductPoint& x,
                                    const IntervalSet& J, const IntervalSet& Jp,
                                    const TwistSpec& spec, int m_max);

// Rational-ergodicity statistic over B = L_0^0: the second moment of the
// r-step visit count against the squared first moment, integrated over
// tower-N starting levels that carry a full r-orbit.
struct RatErgReport {
  long long r = 0;
  int N = 0;
  bool window_ok = false;       // h_N >= 4r
  long long starts = 0;         // B-levels in [0, h_N - r)
  Rat first;                    // 3^-N sum S_r^2
  Rat second;                   // (3^-N sum S_r)^2
  Rat mhat;                     // first / second
  Rat boundary_error;           // max possible shift of mhat from the
                                // truncated starts
  long long max_window_count = 0;  // sup of B-visits over length-r windows
};
RatErgReport rational_ergodicity_stat(const TowerSystem& sys, long long r,
                                      int N);

}  // namespace nfc::measures
