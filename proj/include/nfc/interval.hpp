#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace nfc {

// Closed interval of integers [lo, hi]; empty when hi < lo.
struct Interval {
  long long lo = 0;
  long long hi = -1;

  bool empty() const { return hi < lo; }
  long long size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(long long j) const { return lo <= j && j <= hi; }
  bool contains(const Interval& o) const {
    return o.empty() || (lo <= o.lo && o.hi <= hi);
  }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Sorted list of disjoint, non-adjacent closed intervals.
using IntervalSet = std::vector<Interval>;

inline IntervalSet normalize(IntervalSet v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](const Interval& i) { return i.empty(); }),
          v.end());
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo;
  });
  IntervalSet out;
  for (const auto& i : v) {
    if (!out.empty() && i.lo <= out.back().hi + 1)
      out.back().hi = std::max(out.back().hi, i.hi);
    else
      out.push_back(i);
  }
  return out;
}

inline long long total_size(const IntervalSet& v) {
  long long s = 0;
  for (const auto& i : v) s += i.size();
  return s;
}

inline bool set_contains(const IntervalSet& v, long long j) {
  auto it = std::upper_bound(
      v.begin(), v.end(), j,
      [](long long x, const Interval& i) { return x < i.lo; });
  if (it == v.begin()) return false;
  --it;
  return it->contains(j);
}

inline IntervalSet restrict_to(const IntervalSet& v, const Interval& I) {
  IntervalSet out;
  for (const auto& i : v) {
    Interval c = intersect(i, I);
    if (!c.empty()) out.push_back(c);
  }
  return out;
}

inline bool subset_of(const IntervalSet& a, const IntervalSet& b) {
  // a and b normalized
  std::size_t j = 0;
  for (const auto& i : a) {
    while (j < b.size() && b[j].hi < i.lo) ++j;
    if (j == b.size() || !(b[j].lo <= i.lo && i.hi <= b[j].hi)) return false;
  }
  return true;
}

}  // namespace nfc
