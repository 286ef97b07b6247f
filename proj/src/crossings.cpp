#include "nfc/crossings.hpp"

#include <bit>
#include <climits>
#include <sstream>
#include <stdexcept>

namespace nfc::crossings {

namespace {

long long to_ll_clamped(Index v) {
  const Index lo = LLONG_MIN / 4, hi = LLONG_MAX / 4;
  if (v < lo) return (long long)lo;
  if (v > hi) return (long long)hi;
  return (long long)v;
}

void require_window_valid(const TowerSystem& sys, const ProductPoint& x,
                          Interval w) {
  Interval v = valid_window(sys, x);
  if (!v.contains(w))
    throw std::out_of_range("window exceeds the valid truncation range");
}

}  // namespace

Interval valid_window(const TowerSystem& sys, const ProductPoint& x) {
  Index lo = std::numeric_limits<Index>::min();
  Index hi = std::numeric_limits<Index>::max();
  Index h = sys.height(x.trunc());
  for (const auto& c : x.coords) {
    lo = std::max(lo, -c.idx);
    hi = std::min(hi, h - 1 - c.idx);
  }
  return {to_ll_clamped(lo), to_ll_clamped(hi)};
}

bool all_in_tower(const TowerSystem& sys, const ProductPoint& x, int n,
                  long long j) {
  for (const auto& c : x.coords)
    if (!sys.level_at(c.trunc, c.idx + j, n)) return false;
  return true;
}

IntervalSet visit_set(const TowerSystem& sys, const ProductPoint& x, int n,
                      Interval window) {
  require_window_valid(sys, x, window);
  IntervalSet out;
  bool open = false;
  long long start = 0;
  for (long long j = window.lo; j <= window.hi; ++j) {
    bool in = all_in_tower(sys, x, n, j);
    if (in && !open) {
      open = true;
      start = j;
    } else if (!in && open) {
      out.push_back({start, j - 1});
      open = false;
    }
  }
  if (open) out.push_back({start, window.hi});
  return out;
}

long long gamma_count(const TowerSystem& sys, const ProductPoint& x, int n,
                      Interval interval) {
  require_window_valid(sys, x, interval);
  long long c = 0;
  for (long long j = interval.lo; j <= interval.hi; ++j)
    if (all_in_tower(sys, x, n, j)) ++c;
  return c;
}

VisitBitmap::VisitBitmap(const TowerSystem& sys, const ProductPoint& x, int n,
                         Interval window)
    : window_(window) {
  require_window_valid(sys, x, window);
  long long len = std::max<long long>(window.size(), 0);
  bits_.assign((std::size_t)((len + 63) / 64), 0);
  for (long long j = window.lo; j <= window.hi; ++j) {
    if (all_in_tower(sys, x, n, j)) {
      long long o = j - window.lo;
      bits_[(std::size_t)(o >> 6)] |= (std::uint64_t(1) << (o & 63));
    }
  }
  prefix_.assign(bits_.size() + 1, 0);
  for (std::size_t w = 0; w < bits_.size(); ++w)
    prefix_[w + 1] = prefix_[w] + std::popcount(bits_[w]);
}

long long VisitBitmap::count(Interval I) const {
  Interval c = intersect(I, window_);
  if (c.empty()) return 0;
  long long lo = c.lo - window_.lo, hi = c.hi - window_.lo;
  std::size_t wlo = (std::size_t)(lo >> 6), whi = (std::size_t)(hi >> 6);
  auto masked = [&](std::size_t w, int from, int to) {
    std::uint64_t m = bits_[w];
    if (from > 0) m &= ~std::uint64_t(0) << from;
    if (to < 63) m &= ~std::uint64_t(0) >> (63 - to);
    return (long long)std::popcount(m);
  };
  if (wlo == whi) return masked(wlo, int(lo & 63), int(hi & 63));
  long long total = masked(wlo, int(lo & 63), 63) + masked(whi, 0, int(hi & 63));
  total += prefix_[whi] - prefix_[wlo + 1];
  return total;
}

namespace {

struct CoordEval {
  bool all_in = false;
  std::vector<Index> levels;
  std::vector<int> ts;  // empty when n == trunc
};

CoordEval eval_at(const TowerSystem& sys, const ProductPoint& x, int n,
                  long long j) {
  CoordEval e;
  e.all_in = true;
  int N = x.trunc();
  for (const auto& c : x.coords) {
    if (n == N) {
      e.levels.push_back(c.idx + j);
      continue;
    }
    auto up = sys.level_at(N, c.idx + j, n + 1);
    if (!up) {
      e.all_in = false;
      return e;
    }
    auto cls = sys.project(n, *up);
    if (!cls.child) {
      e.all_in = false;
      return e;
    }
    e.levels.push_back(cls.j);
    e.ts.push_back(cls.t);
  }
  return e;
}

}  // namespace

std::vector<Crossing> extract_crossings(const TowerSystem& sys,
                                        const ProductPoint& x, int n,
                                        Interval window, const Rat& eta) {
  require_window_valid(sys, x, window);
  const Index h = sys.height(n);
  const Interval valid = valid_window(sys, x);
  const long long half = (long long)(h / 2);
  const Interval centered{-half, -half + (long long)h - 1};  // I_n

  std::vector<Crossing> out;
  std::optional<long long> run_start;
  std::vector<int> run_t;
  CoordEval prev;

  auto close_run = [&](long long a, long long b, const std::vector<int>& tvec,
                       const CoordEval& first, const CoordEval& last) {
    Crossing cr;
    cr.n = n;
    cr.interval = {a, b};
    cr.tvec = tvec;
    cr.synchronized = true;
    for (std::size_t i = 1; i < tvec.size(); ++i)
      if (tvec[i] != tvec[0]) cr.synchronized = false;
    long long overlap = intersect(cr.interval, centered).size();
    // substantial: |J cap I_n| >= eta h_n, exact rational comparison
    cr.substantial =
        Rat(BigInt((long)overlap)) >= eta * Rat(to_bigint(h));
    bool left_final = false, right_final = false;
    if (a > window.lo) {
      left_final = true;
    } else {
      for (Index lv : first.levels)
        if (lv == 0) left_final = true;
      if (!left_final && a - 1 >= valid.lo) {
        CoordEval pe = eval_at(sys, x, n, a - 1);
        left_final = !(pe.all_in && pe.ts == tvec);
      }
    }
    if (b < window.hi) {
      right_final = true;
    } else {
      for (Index lv : last.levels)
        if (lv == h - 1) right_final = true;
      if (!right_final && b + 1 <= valid.hi) {
        CoordEval ne = eval_at(sys, x, n, b + 1);
        right_final = !(ne.all_in && ne.ts == tvec);
      }
    }
    cr.partial = !(left_final && right_final);
    out.push_back(std::move(cr));
  };

  CoordEval first_eval;
  for (long long j = window.lo; j <= window.hi; ++j) {
    CoordEval e = eval_at(sys, x, n, j);
    bool continues = e.all_in && run_start && e.ts == run_t;
    if (run_start && !continues) {
      close_run(*run_start, j - 1, run_t, first_eval, prev);
      run_start.reset();
    }
    if (e.all_in && !run_start) {
      run_start = j;
      run_t = e.ts;
      first_eval = e;
    }
    prev = e;
  }
  if (run_start) close_run(*run_start, window.hi, run_t, first_eval, prev);
  return out;
}

std::optional<Interval> crossing_containing(const TowerSystem& sys,
                                            const ProductPoint& x, int n,
                                            long long j0) {
  const Index h = sys.height(n);
  Index lo = std::numeric_limits<Index>::min();
  Index hi = std::numeric_limits<Index>::max();
  for (const auto& c : x.coords) {
    auto lv = sys.level_at(c.trunc, c.idx + j0, n);
    if (!lv) return std::nullopt;
    lo = std::max(lo, (Index)j0 - *lv);
    hi = std::min(hi, (Index)j0 + (h - 1 - *lv));
  }
  return Interval{to_ll_clamped(lo), to_ll_clamped(hi)};
}

std::vector<Interval> n_intervals(const TowerSystem& sys, int n,
                                  Interval range) {
  if (range.empty()) return {};
  Index h = sys.height(n);
  if (h > LLONG_MAX / 4) throw std::out_of_range("n_intervals: h_n too large");
  long long hh = (long long)h;
  long long m_lo = (long long)floor_div(range.lo, hh);
  long long m_hi = (long long)floor_div(range.hi, hh);
  std::vector<Interval> out;
  for (long long m = m_lo; m <= m_hi; ++m)
    out.push_back({m * hh, (m + 1) * hh - 1});
  return out;
}

ShiftClass classify_crossing_at(const TowerSystem& sys, const ProductPoint& x,
                                long long ell, long long r) {
  const auto& cp = sys.params();
  if (ell < 1 || ell > (long long)cp.n_seq.size())
    throw std::out_of_range("classify_crossing_at: ell out of range");
  int n_l = (int)cp.n_seq[(std::size_t)ell - 1];
  int k = params::k_of(cp, ell);
  int npr = n_l - k;
  if (n_l + 1 > x.trunc())
    throw std::out_of_range("classify_crossing_at: needs trunc >= n_l + 1");
  Index shift = (Index)r * sys.height(npr);
  ShiftClass sc;
  for (int i = 0; i < x.d(); ++i) {
    Index idx = x.coords[(std::size_t)i].idx + shift;
    if (idx < 0 || idx >= sys.height(x.trunc()))
      throw std::out_of_range("classify_crossing_at: shift out of truncation");
    if (sys.level_at(x.trunc(), idx, npr)) continue;
    auto j1 = sys.level_at(x.trunc(), idx, n_l + 1);
    if (j1 && sys.fake_level(ell, *j1))
      sc.fake_coords.push_back(i);
    else
      sc.other_coords.push_back(i);
  }
  if (!sc.fake_coords.empty())
    sc.kind = ShiftClass::Fake;
  else if (!sc.other_coords.empty())
    sc.kind = ShiftClass::Other;
  else
    sc.kind = ShiftClass::True;
  return sc;
}

std::optional<int> first_good_level(const TowerSystem& sys,
                                    const ProductPoint& x, int crossing_stage,
                                    int n_lo, int n_hi) {
  for (int n = n_lo; n <= n_hi; ++n) {
    Index h = sys.height(n);
    if (h > LLONG_MAX / 4) break;
    long long hh = (long long)h;
    auto cross = crossing_containing(sys, x, crossing_stage, hh);
    if (cross && cross->contains(Interval{hh, 2 * hh})) return n;
  }
  return std::nullopt;
}

NGoodResult find_n_good(const TowerSystem& sys, const DerivedConstants& dc,
                        const ProductPoint& x, long long ell) {
  const auto& cp = sys.params();
  NGoodResult res;
  if (ell < 1 || ell > (long long)cp.n_seq.size()) {
    res.precondition_detail = "ell outside the covered special stages";
    return res;
  }
  int n_l = (int)cp.n_seq[(std::size_t)ell - 1];
  int k;
  try {
    k = params::k_of(cp, ell);
  } catch (const std::exception&) {
    res.precondition_detail = "l_seq exhausted";
    return res;
  }
  res.n_lo = n_l - k + dc.p1 + 2 * dc.p2;
  res.n_hi = res.n_lo + cp.d;
  if (res.n_hi >= n_l) {
    std::ostringstream os;
    os << "candidate range [" << res.n_lo << "," << res.n_hi
       << "] not below n_l = " << n_l << " (needs k(l) > p1 + 2 p2 + d)";
    res.precondition_detail = os.str();
    return res;
  }
  if (n_l > x.trunc() || res.n_hi > x.trunc()) {
    res.precondition_detail = "candidate range beyond truncation";
    return res;
  }
  res.preconditions_ok = true;
  res.n_good = first_good_level(sys, x, n_l, res.n_lo, res.n_hi);
  return res;
}

Theta1Report verify_theta1(const TowerSystem& sys, const DerivedConstants& dc,
                           const ProductPoint& x, int n, long long ell,
                           long long ellbar, Interval window) {
  const auto& cp = sys.params();
  Theta1Report rep;
  rep.n = n;
  rep.ell = ell;
  rep.ellbar = ellbar;
  rep.theta1 = dc.theta1;
  if (ell < 2 || ell > (long long)cp.n_seq.size() || ellbar < 1 ||
      ellbar > (long long)cp.n_seq.size()) {
    rep.error = "ell/ellbar outside the covered special stages";
    return rep;
  }
  int n_l = (int)cp.n_seq[(std::size_t)ell - 1];
  int n_prev = (int)cp.n_seq[(std::size_t)ell - 2];
  int n_lb = (int)cp.n_seq[(std::size_t)ellbar - 1];
  int k_prev = params::k_of(cp, ell - 1);
  rep.hyp_n_range = n >= n_prev - k_prev + dc.p1 && n < n_l;
  rep.hyp_ell = ell > ellbar + 1;
  Rat h_nlb = Rat(to_bigint(sys.height(n_lb)));
  Rat pw = Rat(pow_bigint(3, (unsigned long)ellbar));
  rep.hyp_choice_of_lb = dc.K1 * rat_of(dc.c_min) / h_nlb + dc.K2 / pw < dc.epsilon;
  rep.hyp_newcondlb = (dc.K1 + dc.K2) / pw < dc.eta;

  auto cross = crossing_containing(sys, x, n_l, 0);
  if (!cross) {
    rep.error = "orbit not inside tower n_l at shift 0";
    return rep;
  }
  Interval scan = intersect(intersect(*cross, window), valid_window(sys, x));
  rep.crossing = scan;
  if (scan.empty()) {
    rep.error = "empty scan window";
    return rep;
  }

  Index h = sys.height(n);
  if (h > LLONG_MAX / 8) {
    rep.error = "h_n too large for window arithmetic";
    return rep;
  }
  long long hh = (long long)h;
  long long m_lo = (long long)floor_div(scan.lo + hh - 1, hh);
  long long m_hi = (long long)floor_div(scan.hi + 1, hh) - 1;
  if (m_hi - m_lo < 1) {
    rep.error = "no qualifying pair of aligned intervals in the crossing";
    return rep;
  }
  VisitBitmap bm(sys, x, n_lb, scan);
  auto gamma = [&](Interval I) { return bm.count(I); };
  for (long long m = m_lo; m < m_hi; ++m) {
    Theta1Pair pr;
    pr.i1 = {m * hh, (m + 1) * hh - 1};
    pr.i2 = {(m + 1) * hh, (m + 2) * hh - 1};
    pr.g1 = gamma(pr.i1);
    pr.g2 = gamma(pr.i2);
    if (pr.g1 > 0 && pr.g2 > 0) {
      pr.ratio = make_rat(pr.g2, pr.g1);
      pr.ok = dc.theta1 < pr.ratio && pr.ratio < 1 / dc.theta1;
      if (!rep.min_ratio || pr.ratio < *rep.min_ratio) rep.min_ratio = pr.ratio;
      if (!rep.max_ratio || pr.ratio > *rep.max_ratio) rep.max_ratio = pr.ratio;
    } else {
      pr.ratio = 0;
      pr.ok = false;
    }
    if (!pr.ok) ++rep.failures;
    rep.pairs.push_back(pr);
  }
  // Clipped pair at the right edge of the crossing: only the upper bound
  // applies, with the second count taken over I2 cap J.
  Interval i2b{(m_hi + 1) * hh, (m_hi + 2) * hh - 1};
  if (i2b.lo <= scan.hi && i2b.hi > scan.hi) {
    Theta1Pair pr;
    pr.i1 = {m_hi * hh, (m_hi + 1) * hh - 1};
    pr.i2 = i2b;
    pr.boundary = true;
    pr.g1 = gamma(pr.i1);
    pr.g2 = gamma(intersect(i2b, scan));
    if (pr.g1 > 0) {
      pr.ratio = make_rat(pr.g2, pr.g1);
      pr.ok = pr.ratio < 1 / dc.theta1;
    } else {
      pr.ratio = 0;
      pr.ok = pr.g2 == 0;
    }
    if (!pr.ok) ++rep.failures;
    rep.pairs.push_back(pr);
  }
  if (rep.pairs.empty()) rep.error = "no qualifying pair in window";
  return rep;
}

CrossingStatsReport verify_crossing_stats(const TowerSystem& sys,
                                          const DerivedConstants& dc,
                                          const ProductPoint& x,
                                          long long ellbar, long long ell,
                                          long long c, Interval I) {
  const auto& cp = sys.params();
  CrossingStatsReport rep;
  rep.ellbar = ellbar;
  rep.ell = ell;
  rep.c = c;
  rep.I = I;
  if (ellbar < 1 || ell < 1 || ellbar + ell > (long long)cp.n_seq.size()) {
    rep.precondition_violations.push_back(
        "ellbar/ell outside the covered special stages");
    return rep;
  }
  int n_lb = (int)cp.n_seq[(std::size_t)ellbar - 1];
  int n_top = (int)cp.n_seq[(std::size_t)(ellbar + ell) - 1];
  int n_mid = (int)cp.n_seq[(std::size_t)(ellbar + ell) - 2];  // n_{lbar+l-1}
  if (n_top > x.trunc()) {
    rep.precondition_violations.push_back("n_{lbar+l} beyond truncation");
    return rep;
  }
  if (!valid_window(sys, x).contains(I)) {
    rep.precondition_violations.push_back("window beyond truncation");
    return rep;
  }
  auto cross = crossing_containing(sys, x, n_top, I.lo);
  if (!cross || !cross->contains(I))
    rep.precondition_violations.push_back(
        "I not contained in an n_{lbar+l}-crossing");
  if (!(Rat(BigInt((long)I.size())) >=
        dc.eta * Rat(to_bigint(sys.height(n_mid)))))
    rep.precondition_violations.push_back("|I| < eta h_{n_{lbar+l-1}}");
  if (!(c >= 1 && Rat(BigInt((long)c)) <= Rat(to_bigint(sys.height(n_lb)))))
    rep.precondition_violations.push_back("c outside [1, h_{n_lbar}]");

  // Exact statistics: pieces of the joint visit set, with true crossing
  // sizes recovered beyond the edges of I.
  long long visits = 0, small_visits = 0;
  std::optional<long long> start;
  auto flush_piece = [&](long long a, long long b) {
    auto cr = crossing_containing(sys, x, n_lb, a);
    long long true_size = cr ? cr->size() : (b - a + 1);
    long long piece = b - a + 1;
    visits += piece;
    if (true_size <= c) small_visits += piece;
  };
  for (long long j = I.lo; j <= I.hi; ++j) {
    bool in = all_in_tower(sys, x, n_lb, j);
    if (in && !start) start = j;
    if (!in && start) {
      flush_piece(*start, j - 1);
      start.reset();
    }
  }
  if (start) flush_piece(*start, I.hi);

  rep.visits = visits;
  rep.small_visits = small_visits;
  rep.density = make_rat(visits, I.size());
  rep.density_bound = pow_rat(Rat(1) - dc.eta, 2 * (unsigned long)ell);
  rep.density_ok = rep.density >= rep.density_bound;
  rep.proportion = visits > 0 ? make_rat(small_visits, visits) : Rat(0);
  rep.proportion_bound =
      dc.K1 * rat_of(c) / Rat(to_bigint(sys.height(n_lb))) +
      dc.K2 / Rat(pow_bigint(3, (unsigned long)ellbar));
  rep.proportion_ok = rep.proportion <= rep.proportion_bound;

  // Hypothesis flags: the induced (c_m, s_m) sequences must satisfy the
  // hierarchy smallness conditions, and lbar must be large enough for the
  // empirical-measure choice.
  rep.hyp_cs1 = true;
  rep.hyp_cs2 = true;
  Rat cs1_bound = dc.eta / (dc.eta + 1) * dc.eta / cp.d;
  for (long long m = 1; m <= ell; ++m) {
    long long li = ellbar + m - 1;
    int stage = (int)cp.n_seq[(std::size_t)li - 1];
    int kk = params::k_of(cp, li);
    Rat cm = Rat(to_bigint(sys.height(stage)));
    Rat sm = Rat(to_bigint(sys.height(stage - kk))) + 1;
    if (!(sm / cm < cs1_bound)) rep.hyp_cs1 = false;
    if (m < ell) {
      int stage_next = (int)cp.n_seq[(std::size_t)li];
      Rat cnext = Rat(to_bigint(sys.height(stage_next)));
      if (!(cm / cnext < dc.eta / dc.K1)) rep.hyp_cs2 = false;
    }
  }
  Rat pw = Rat(pow_bigint(3, (unsigned long)ellbar));
  Rat h_nlb = Rat(to_bigint(sys.height(n_lb)));
  rep.hyp_choice_of_lb = dc.K1 * rat_of(dc.c_min) / h_nlb + dc.K2 / pw < dc.epsilon;
  rep.hyp_newcondlb = (dc.K1 + dc.K2) / pw < dc.eta;
  rep.hypothesis_ok = rep.hyp_cs1 && rep.hyp_cs2 && rep.hyp_choice_of_lb &&
                      rep.hyp_newcondlb && rep.precondition_violations.empty();
  return rep;
}

SubstantialCoverage substantial_coverage(const TowerSystem& sys,
                                         const DerivedConstants& dc,
                                         const ProductPoint& x,
                                         long long ell) {
  const auto& cp = sys.params();
  if (ell < 2 || ell > (long long)cp.n_seq.size())
    throw std::out_of_range("substantial_coverage: need 2 <= ell <= covered");
  SubstantialCoverage sc;
  int n = (int)cp.n_seq[(std::size_t)ell - 2];
  sc.n = n;
  Index h = sys.height(n);
  if (h > LLONG_MAX / 4)
    throw std::out_of_range("substantial_coverage: h_n too large");
  long long half = (long long)(h / 2);
  sc.window = {-half, -half + (long long)h - 1};
  auto crs = extract_crossings(sys, x, n, sc.window, dc.eta);
  long long covered = 0;
  for (const auto& cr : crs)
    if (cr.substantial) {
      covered += intersect(cr.interval, sc.window).size();
      ++sc.substantial_count;
    }
  sc.coverage = make_rat(covered, (long long)h);
  sc.coverage_bound = Rat(1) - Rat((long)(cp.d + 2)) * dc.eta;
  sc.coverage_ok = sc.coverage >= sc.coverage_bound;
  int k_prev = params::k_of(cp, ell - 1);
  sc.hypothesis_ok = Rat(1) / Rat(pow_bigint(3, (unsigned long)k_prev)) <
                     dc.eta / (2 * cp.d);
  return sc;
}

std::optional<ExtendedPos> extended_level(const TowerSystem& sys,
                                          long long ell, Point p, int n) {
  const auto& cp = sys.params();
  if (ell < 1 || ell > (long long)cp.n_seq.size())
    throw std::out_of_range("extended_level: ell out of range");
  int n_l = (int)cp.n_seq[(std::size_t)ell - 1];
  int npr = n_l - params::k_of(cp, ell);
  if (n > npr) throw std::invalid_argument("extended_level: need n <= n'");
  if (auto lv = sys.level_at(p.trunc, p.idx, n)) {
    ExtendedPos ep;
    ep.level = *lv;
    ep.t = sys.subcolumn_at(p.trunc, p.idx, n);
    return ep;
  }
  auto j1 = sys.level_at(p.trunc, p.idx, n_l + 1);
  if (!j1) return std::nullopt;
  auto fk = sys.fake_level(ell, *j1);
  if (!fk) return std::nullopt;
  // the spacer block is a copy of tower n'; resolve tower n inside it
  auto lv = sys.level_at(npr, fk->second, n);
  if (!lv) return std::nullopt;
  ExtendedPos ep;
  ep.fake = true;
  ep.level = *lv;
  if (n < npr) ep.t = sys.subcolumn_at(npr, fk->second, n);
  return ep;
}

}  // namespace nfc::crossings
