#include "nfc/dynamics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nfc::dynamics {

ProductPoint make_product(std::vector<Point> coords) {
  if (coords.empty())
    throw std::invalid_argument("make_product: need at least one coordinate");
  for (const auto& c : coords)
    if (c.trunc != coords[0].trunc)
      throw std::invalid_argument("make_product: mixed truncations");
  return ProductPoint{std::move(coords)};
}

StepResult step(const TowerSystem& sys, Point p) {
  Index h = sys.height(p.trunc);
  if (p.idx + 1 >= h) return OutOfTruncation{1};
  return Point{p.trunc, p.idx + 1};
}

StepResult iterate(const TowerSystem& sys, Point p, Index k) {
  Index h = sys.height(p.trunc);
  Index to = p.idx + k;
  if (to < 0) return OutOfTruncation{-to};
  if (to >= h) return OutOfTruncation{to - (h - 1)};
  return Point{p.trunc, to};
}

std::optional<Index> level(const TowerSystem& sys, Point p, int n) {
  return sys.level_at(p.trunc, p.idx, n);
}

std::optional<int> subcolumn(const TowerSystem& sys, Point p, int n) {
  return sys.subcolumn_at(p.trunc, p.idx, n);
}

Point lift(const TowerSystem& sys, Point p, int new_trunc, Extension ext) {
  if (new_trunc < p.trunc) throw std::invalid_argument("lift: shrinking trunc");
  return Point{new_trunc, sys.embed(p.trunc, p.idx, new_trunc, ext)};
}

Point lift(const TowerSystem& sys, Point p, int new_trunc,
           const LiftDigits& digits) {
  if ((int)digits.digits.size() != new_trunc - p.trunc)
    throw std::invalid_argument("lift: digit list has wrong length");
  return Point{new_trunc, sys.embed(p.trunc, p.idx, digits.digits)};
}

Point lift_random(const TowerSystem& sys, Point p, int new_trunc,
                  std::mt19937_64& rng) {
  LiftDigits d;
  for (int m = p.trunc; m < new_trunc; ++m)
    d.digits.push_back(1 + (int)uniform_u64(rng, 3));
  return lift(sys, p, new_trunc, d);
}

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_u64: empty range");
  // largest multiple of n that fits; rejection keeps the draw unbiased
  std::uint64_t cut = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
  for (;;) {
    std::uint64_t v = rng();
    if (v < cut) return v % n;
  }
}

Index uniform_index(std::mt19937_64& rng, Index n) {
  if (n <= 0) throw std::invalid_argument("uniform_index: empty range");
  if (n <= (Index)(~std::uint64_t(0)))
    return (Index)uniform_u64(rng, (std::uint64_t)n);
  unsigned __int128 un = (unsigned __int128)n;
  unsigned __int128 max = ~(unsigned __int128)0;
  unsigned __int128 cut = max - (max % un);
  for (;;) {
    std::uint64_t hi = rng();
    std::uint64_t lo = rng();
    unsigned __int128 v = ((unsigned __int128)hi << 64) | lo;
    if (v < cut) return (Index)(v % un);
  }
}

Point random_point(const TowerSystem& sys, int N, std::mt19937_64& rng) {
  return Point{N, uniform_index(rng, sys.height(N))};
}

WindowCheck xinfty_window_ok(const TowerSystem& sys, Point p, long long l_lo,
                             long long l_hi) {
  const auto& cp = sys.params();
  for (long long l = l_lo; l <= l_hi; ++l) {
    if (l < 1 || l > (long long)cp.n_seq.size())
      throw std::out_of_range("xinfty_window_ok: l out of covered range");
    long long n_l = cp.n_seq[(std::size_t)l - 1];
    long long n_prev = l == 1 ? 0 : cp.n_seq[(std::size_t)l - 2];
    if (n_l > p.trunc)
      throw std::out_of_range("xinfty_window_ok: n_l beyond truncation");
    if (!sys.level_at(p.trunc, p.idx, (int)n_prev)) {
      std::ostringstream os;
      os << "point outside tower n_" << l - 1;
      return {false, os.str()};
    }
    auto j_nl = sys.level_at(p.trunc, p.idx, (int)n_l);
    if (!j_nl) {
      std::ostringstream os;
      os << "point outside tower n_" << l;
      return {false, os.str()};
    }
    for (long long n = n_prev; n <= n_l - l; ++n) {
      auto rank = sys.occurrence_index((int)n, (int)n_l, *j_nl);
      if (!rank) {
        std::ostringstream os;
        os << "outside tower " << n << " (l=" << l << ")";
        return {false, os.str()};
      }
      BigInt total = sys.level_census_count((int)n, (int)n_l);
      if (*rank < 100 || *rank > total - 101) {
        std::ostringstream os;
        os << "occurrence " << rank->get_str() << " of tower " << n
           << " in tower " << n_l << " is within 100 of an end";
        return {false, os.str()};
      }
    }
  }
  return {true, ""};
}

TwistSpec TwistSpec::make(int d, std::vector<int> g1) {
  std::sort(g1.begin(), g1.end());
  g1.erase(std::unique(g1.begin(), g1.end()), g1.end());
  if (g1.empty() || (int)g1.size() >= d)
    throw std::invalid_argument("TwistSpec: G0 and G1 must both be nonempty");
  for (int i : g1)
    if (i < 0 || i >= d) throw std::invalid_argument("TwistSpec: bad index");
  return TwistSpec{std::move(g1)};
}

bool TwistSpec::in_g1(int i) const {
  return std::binary_search(g1.begin(), g1.end(), i);
}

ProductResult step_product(const TowerSystem& sys, const ProductPoint& x) {
  ProductPoint out = x;
  for (auto& c : out.coords) {
    auto r = step(sys, c);
    if (auto* e = std::get_if<OutOfTruncation>(&r)) return *e;
    c = std::get<Point>(r);
  }
  return out;
}

ProductResult iterate_product(const TowerSystem& sys, const ProductPoint& x,
                              Index k) {
  ProductPoint out = x;
  for (auto& c : out.coords) {
    auto r = iterate(sys, c, k);
    if (auto* e = std::get_if<OutOfTruncation>(&r)) return *e;
    c = std::get<Point>(r);
  }
  return out;
}

ProductResult twist(const TowerSystem& sys, const ProductPoint& x,
                    const TwistSpec& spec) {
  ProductPoint out = x;
  for (int i = 0; i < out.d(); ++i) {
    if (!spec.in_g1(i)) continue;
    auto r = step(sys, out.coords[(std::size_t)i]);
    if (auto* e = std::get_if<OutOfTruncation>(&r)) return *e;
    out.coords[(std::size_t)i] = std::get<Point>(r);
  }
  return out;
}

Index detect_offset(Point x1, Point x2) {
  if (x1.trunc != x2.trunc)
    throw std::invalid_argument("detect_offset: mixed truncations");
  return x2.idx - x1.idx;
}

}  // namespace nfc::dynamics
