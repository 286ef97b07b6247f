#include "nfc/measures.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

#include "nfc/crossings.hpp"

namespace nfc::measures {

namespace {

void require_levels_small(const TowerSystem& sys, int n) {
  if (sys.height(n) > LLONG_MAX / 4)
    throw std::out_of_range("tower level does not fit histogram keys");
}

// Streams every shift j of the support; f receives (j, levels) for the
// shifts where all coordinates are inside tower n.
template <typename F>
void for_each_in_Cn(const TowerSystem& sys, const EmpiricalMeasure& g, int n,
                    F&& f) {
  int N = g.base.trunc();
  std::vector<long long> levels((std::size_t)g.base.d());
  for (const auto& iv : g.support) {
    for (long long j = iv.lo; j <= iv.hi; ++j) {
      bool all = true;
      for (int i = 0; i < g.base.d(); ++i) {
        auto lv = sys.level_at(N, g.base.coords[(std::size_t)i].idx + j, n);
        if (!lv) {
          all = false;
          break;
        }
        levels[(std::size_t)i] = (long long)*lv;
      }
      if (all) f(j, levels);
    }
  }
}

}  // namespace

std::vector<Index> diagonal_id(const BoxKey& key) {
  Index mn = key.levels.empty() ? 0 : key.levels[0];
  for (Index v : key.levels) mn = std::min(mn, v);
  std::vector<Index> id;
  for (Index v : key.levels) id.push_back(v - mn);
  return id;
}

EmpiricalMeasure empirical(const TowerSystem& sys, const ProductPoint& x,
                           IntervalSet J) {
  J = normalize(std::move(J));
  Interval valid = crossings::valid_window(sys, x);
  for (const auto& iv : J)
    if (!valid.contains(iv))
      throw std::out_of_range("empirical: support exceeds truncation range");
  return EmpiricalMeasure{x, std::move(J)};
}

BoxHistogram box_histogram(const TowerSystem& sys, const EmpiricalMeasure& g,
                           int n) {
  require_levels_small(sys, n);
  BoxHistogram h;
  for_each_in_Cn(sys, g, n,
                 [&](long long, const std::vector<long long>& lv) { ++h[lv]; });
  return h;
}

long long count_box(const TowerSystem& sys, const EmpiricalMeasure& g,
                    const BoxKey& key) {
  if ((int)key.levels.size() != g.base.d())
    throw std::invalid_argument("count_box: dimension mismatch");
  long long c = 0;
  int N = g.base.trunc();
  for (const auto& iv : g.support) {
    for (long long j = iv.lo; j <= iv.hi; ++j) {
      bool hit = true;
      for (int i = 0; i < g.base.d(); ++i) {
        auto lv =
            sys.level_at(N, g.base.coords[(std::size_t)i].idx + j, key.n);
        if (!lv || *lv != key.levels[(std::size_t)i]) {
          hit = false;
          break;
        }
      }
      if (hit) ++c;
    }
  }
  return c;
}

long long count_Cn(const TowerSystem& sys, const EmpiricalMeasure& g, int n) {
  long long c = 0;
  for_each_in_Cn(sys, g, n,
                 [&](long long, const std::vector<long long>&) { ++c; });
  return c;
}

Rat ratio(const TowerSystem& sys, const EmpiricalMeasure& g,
          const BoxKey& key) {
  long long total = count_Cn(sys, g, key.n);
  if (total == 0) throw std::domain_error("ratio: zero mass in C_n^d");
  return make_rat(count_box(sys, g, key), total);
}

Rat box_ratio_distance(const TowerSystem& sys, const EmpiricalMeasure& g1,
                       const EmpiricalMeasure& g2, int n) {
  BoxHistogram h1 = box_histogram(sys, g1, n);
  BoxHistogram h2 = box_histogram(sys, g2, n);
  long long t1 = 0, t2 = 0;
  for (const auto& [k, v] : h1) t1 += v;
  for (const auto& [k, v] : h2) t2 += v;
  if (t1 == 0 || t2 == 0)
    throw std::domain_error("box_ratio_distance: zero mass in C_n^d");
  Rat best = 0;
  auto consider = [&](long long a, long long b) {
    Rat d = make_rat(a, t1) - make_rat(b, t2);
    if (d < 0) d = -d;
    if (d > best) best = d;
  };
  for (const auto& [k, v] : h1) {
    auto it = h2.find(k);
    consider(v, it == h2.end() ? 0 : it->second);
  }
  for (const auto& [k, v] : h2)
    if (!h1.count(k)) consider(0, v);
  return best;
}

long long diagonal_spread(const TowerSystem& sys, const EmpiricalMeasure& g,
                          int n) {
  BoxHistogram h = box_histogram(sys, g, n);
  // group by canonical diagonal
  std::map<std::vector<long long>, std::pair<long long, long long>>
      stats;  // id -> (boxes charged, max count); min over charged separate
  std::map<std::vector<long long>, long long> min_charged;
  for (const auto& [k, v] : h) {
    long long mn = *std::min_element(k.begin(), k.end());
    std::vector<long long> id;
    id.reserve(k.size());
    for (long long x : k) id.push_back(x - mn);
    auto& st = stats[id];
    st.first += 1;
    st.second = std::max(st.second, v);
    auto it = min_charged.find(id);
    if (it == min_charged.end())
      min_charged[id] = v;
    else
      it->second = std::min(it->second, v);
  }
  long long h_n = (long long)sys.height(n);
  long long spread = 0;
  for (const auto& [id, st] : stats) {
    long long span = *std::max_element(id.begin(), id.end());
    long long diag_len = h_n - span;  // number of boxes on the diagonal
    long long mn = st.first < diag_len ? 0 : min_charged[id];
    spread = std::max(spread, st.second - mn);
  }
  return spread;
}

Rat edge_ratio(const TowerSystem& sys, const EmpiricalMeasure& g, int n) {
  Index top = sys.height(n) - 1;
  long long edge = 0, total = 0;
  for_each_in_Cn(sys, g, n, [&](long long, const std::vector<long long>& lv) {
    ++total;
    for (long long v : lv)
      if (v == 0 || (Index)v == top) {
        ++edge;
        break;
      }
  });
  if (total == 0) throw std::domain_error("edge_ratio: zero mass in C_n^d");
  return make_rat(edge, total);
}

Rat hopf_ratio(const TowerSystem& sys, const ProductPoint& x,
               const BoxKey& box, int n, const IntervalSet& J) {
  if (box.n != n) throw std::invalid_argument("hopf_ratio: box level != n");
  EmpiricalMeasure g = empirical(sys, x, J);
  return ratio(sys, g, box);
}

Rat graph_support_fraction(const TowerSystem& sys, const EmpiricalMeasure& g,
                           int n, const std::vector<long long>& offsets) {
  if ((int)offsets.size() != g.base.d() - 1)
    throw std::invalid_argument("graph_support_fraction: need d-1 offsets");
  long long on = 0, total = 0;
  for_each_in_Cn(sys, g, n, [&](long long, const std::vector<long long>& lv) {
    ++total;
    bool hit = true;
    for (std::size_t i = 1; i < lv.size(); ++i)
      if (lv[i] != lv[0] + offsets[i - 1]) {
        hit = false;
        break;
      }
    if (hit) ++on;
  });
  if (total == 0)
    throw std::domain_error("graph_support_fraction: zero mass in C_n^d");
  return make_rat(on, total);
}

std::optional<Index> interior_margin(const TowerSystem& sys,
                                     const EmpiricalMeasure& g, int n) {
  Index top = sys.height(n) - 1;
  std::optional<Index> margin;
  for_each_in_Cn(sys, g, n, [&](long long, const std::vector<long long>& lv) {
    for (long long v : lv) {
      Index m = std::min((Index)v, top - (Index)v);
      if (!margin || m < *margin) margin = m;
    }
  });
  return margin;
}

Rat product_distance(const TowerSystem& sys, const EmpiricalMeasure& g, int n) {
  BoxHistogram h = box_histogram(sys, g, n);
  long long total = 0;
  for (const auto& [k, v] : h) total += v;
  if (total == 0)
    throw std::domain_error("product_distance: zero mass in C_n^d");
  Rat u = Rat(1) / Rat(pow_bigint(to_bigint(sys.height(n)),
                                  (unsigned long)g.base.d()));
  BigInt boxes = pow_bigint(to_bigint(sys.height(n)), (unsigned long)g.base.d());
  Rat best = (BigInt((long)h.size()) < boxes) ? u : Rat(0);  // uncharged box
  for (const auto& [k, v] : h) {
    Rat d = make_rat(v, total) - u;
    if (d < 0) d = -d;
    if (d > best) best = d;
  }
  return best;
}

std::vector<Rat> product_distance_trend(const TowerSystem& sys,
                                        const ProductPoint& x, int n,
                                        const std::vector<long long>& sizes) {
  require_levels_small(sys, n);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i] >= sizes[i + 1])
      throw std::invalid_argument("product_distance_trend: sizes must grow");
  if (sizes.empty()) return {};
  Interval full{0, sizes.back() - 1};
  if (!crossings::valid_window(sys, x).contains(full))
    throw std::out_of_range("product_distance_trend: window beyond trunc");

  BoxHistogram h;
  long long total = 0;
  int N = x.trunc();
  std::vector<long long> lv((std::size_t)x.d());
  std::vector<Rat> out;
  std::size_t next = 0;
  BigInt boxes = pow_bigint(to_bigint(sys.height(n)), (unsigned long)x.d());
  Rat u = Rat(1) / Rat(boxes);
  for (long long j = 0; j < sizes.back(); ++j) {
    bool all = true;
    for (int i = 0; i < x.d(); ++i) {
      auto l = sys.level_at(N, x.coords[(std::size_t)i].idx + j, n);
      if (!l) {
        all = false;
        break;
      }
      lv[(std::size_t)i] = (long long)*l;
    }
    if (all) {
      ++h[lv];
      ++total;
    }
    while (next < sizes.size() && j == sizes[next] - 1) {
      if (total == 0) {
        out.push_back(Rat(1));
      } else {
        Rat best = (BigInt((long)h.size()) < boxes) ? u : Rat(0);
        for (const auto& [k, v] : h) {
          Rat d = make_rat(v, total) - u;
          if (d < 0) d = -d;
          if (d > best) best = d;
        }
        out.push_back(best);
      }
      ++next;
    }
  }
  return out;
}

TwistReport verify_twist_invariance(const TowerSystem& sys,
                                    const ProductPoint& x,
                                    const IntervalSet& J, const IntervalSet& Jp,
                                    const TwistSpec& spec, int m_max) {
  EmpiricalMeasure gJ = empirical(sys, x, J);
  EmpiricalMeasure gJp = empirical(sys, x, Jp);
  TwistReport rep;
  rep.ok = true;
  for (int m = 0; m <= m_max; ++m) {
    BoxHistogram hJ = box_histogram(sys, gJ, m);
    BoxHistogram hJp = box_histogram(sys, gJp, m);
    // candidate boxes B inside Omega_m: charged by gamma_J, or with
    // S^-1 B charged by gamma_J'
    std::vector<std::vector<long long>> candidates;
    for (const auto& [k, v] : hJ) {
      bool omega = true;
      for (long long lv : k)
        if (lv == 0) omega = false;
      if (omega) candidates.push_back(k);
    }
    for (const auto& [k, v] : hJp) {
      std::vector<long long> b = k;  // B = S(k): add 1 on G1
      bool omega = true;
      for (int i = 0; i < (int)b.size(); ++i) {
        if (spec.in_g1(i)) b[(std::size_t)i] += 1;
        if (b[(std::size_t)i] == 0) omega = false;
        if ((Index)b[(std::size_t)i] >= sys.height(m)) omega = false;
      }
      if (omega) candidates.push_back(b);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    for (const auto& b : candidates) {
      std::vector<long long> pre = b;  // S^-1 B: subtract 1 on G1
      for (int i = 0; i < (int)pre.size(); ++i)
        if (spec.in_g1(i)) pre[(std::size_t)i] -= 1;
      auto itJ = hJ.find(b);
      auto itJp = hJp.find(pre);
      long long cJ = itJ == hJ.end() ? 0 : itJ->second;
      long long cJp = itJp == hJp.end() ? 0 : itJp->second;
      if (cJ == 0 && cJp == 0) continue;
      ++rep.boxes_checked;
      if (cJ != cJp && rep.ok) {
        rep.ok = false;
        rep.first_mismatch = TwistMismatch{m, b, cJ, cJp};
      }
    }
    if (!rep.ok) break;
  }
  return rep;
}

RatErgReport rational_ergodicity_stat(const TowerSystem& sys, long long r,
                                      int N) {
  if (r < 1) throw std::invalid_argument("rational_ergodicity_stat: r >= 1");
  Index hN = sys.height(N);
  if (hN <= r)
    throw std::invalid_argument("rational_ergodicity_stat: need h_N > r");
  if (hN > 100'000'000)
    throw std::out_of_range("rational_ergodicity_stat: h_N too large to scan");
  long long H = (long long)hN;

  RatErgReport rep;
  rep.r = r;
  rep.N = N;
  rep.window_ok = hN >= 4 * (Index)r;

  // membership of B = L_0^0 per tower-N level, with prefix counts
  std::vector<std::uint8_t> inB((std::size_t)H, 0);
  std::vector<long long> pref((std::size_t)H + 1, 0);
  for (long long j = 0; j < H; ++j) {
    auto lv = sys.level_at(N, j, 0);
    inB[(std::size_t)j] = lv && *lv == 0;
    pref[(std::size_t)j + 1] = pref[(std::size_t)j] + inB[(std::size_t)j];
  }
  auto S = [&](long long j0) {
    return pref[(std::size_t)(j0 + r)] - pref[(std::size_t)j0];
  };

  BigInt sum = 0, sum_sq = 0;
  long long starts = 0;
  for (long long j0 = 0; j0 < H - r; ++j0) {
    if (!inB[(std::size_t)j0]) continue;
    long long s = S(j0);
    sum += bigint_of(s);
    sum_sq += BigInt((long)s) * BigInt((long)s);
    ++starts;
  }
  rep.starts = starts;
  BigInt scale = pow_bigint(3, (unsigned long)N);
  rep.first = make_rat(sum_sq, scale);
  rep.second = make_rat(sum, scale) * make_rat(sum, scale);
  if (rep.second == 0)
    throw std::domain_error("rational_ergodicity_stat: empty first moment");
  rep.mhat = rep.first / rep.second;

  // sup of B-visits over any length-r index window, and the mass omitted
  // by truncating starts to [0, h_N - r)
  long long maxw = 0;
  for (long long j0 = 0; j0 + r <= H; ++j0) maxw = std::max(maxw, S(j0));
  rep.max_window_count = maxw;
  long long omitted = pref[(std::size_t)H] - pref[(std::size_t)(H - r)];
  // first-order bound on how far the truncated starts can move mhat:
  // |d first| <= omitted maxw^2 3^-N, |d sqrt(second)| <= omitted maxw 3^-N
  Rat extra_first =
      make_rat(bigint_of(omitted) * bigint_of(maxw) * bigint_of(maxw), scale);
  Rat sum_scaled = make_rat(sum, scale);
  Rat db = make_rat(bigint_of(omitted) * bigint_of(maxw), scale);
  rep.boundary_error =
      extra_first / rep.second +
      rep.mhat * (2 * sum_scaled * db + db * db) / rep.second;
  return rep;
}

}  // namespace nfc::measures
