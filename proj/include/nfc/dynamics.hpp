#pragma once

#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "nfc/tower.hpp"

namespace nfc::dynamics {

using tower::Extension;
using tower::TowerSystem;

// A point of the truncated space: its level index in tower trunc. All
// j_n, t_n are derived on demand, never stored. The finite model agrees
// with the infinite system on any orbit segment that never climbs past
// the top of tower trunc.
struct Point {
  int trunc = 0;
  Index idx = 0;
};

struct ProductPoint {
  std::vector<Point> coords;  // common truncation

  int trunc() const { return coords.empty() ? 0 : coords[0].trunc; }
  int d() const { return (int)coords.size(); }
};

ProductPoint make_product(std::vector<Point> coords);

// Error value: the orbit left the truncation; overshoot says by how much
// (steps past the last valid index, or below index 0 for negative k).
struct OutOfTruncation {
  Index overshoot = 0;
};

using StepResult = std::variant<Point, OutOfTruncation>;

StepResult step(const TowerSystem& sys, Point p);
StepResult iterate(const TowerSystem& sys, Point p, Index k);

std::optional<Index> level(const TowerSystem& sys, Point p, int n);
std::optional<int> subcolumn(const TowerSystem& sys, Point p, int n);

// Extend the truncation; AllMiddle picks t = 2 for every new digit.
struct LiftDigits {
  std::vector<int> digits;
};
Point lift(const TowerSystem& sys, Point p, int new_trunc, Extension ext);
Point lift(const TowerSystem& sys, Point p, int new_trunc,
           const LiftDigits& digits);
Point lift_random(const TowerSystem& sys, Point p, int new_trunc,
                  std::mt19937_64& rng);

// Deterministic uniform draw over [0, n); used instead of
// std::uniform_int_distribution so reports are byte-identical across
// standard libraries.
std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t n);
Index uniform_index(std::mt19937_64& rng, Index n);

Point random_point(const TowerSystem& sys, int N, std::mt19937_64& rng);

// Window condition of a typical point: for every l in [l_lo, l_hi] and
// every n with n_{l-1} <= n <= n_l - l, the occurrence of tower n inside
// tower n_l containing p is neither among the first hundred nor among the
// last hundred.
struct WindowCheck {
  bool ok = false;
  std::string reason;  // first failure, empty when ok
};
WindowCheck xinfty_window_ok(const TowerSystem& sys, Point p, long long l_lo,
                             long long l_hi);

// Partition of {1,..,d} (0-based internally) into G0 and G1, both nonempty.
struct TwistSpec {
  std::vector<int> g1;  // coordinates T acts on, 0-based, sorted

  static TwistSpec make(int d, std::vector<int> g1);
  bool in_g1(int i) const;
};

using ProductResult = std::variant<ProductPoint, OutOfTruncation>;

ProductResult step_product(const TowerSystem& sys, const ProductPoint& x);
ProductResult iterate_product(const TowerSystem& sys, const ProductPoint& x,
                              Index k);
ProductResult twist(const TowerSystem& sys, const ProductPoint& x,
                    const TwistSpec& spec);

// Claimed exponent with x2 = T^e x1; exact within the truncation.
Index detect_offset(Point x1, Point x2);

}  // namespace nfc::dynamics
