#include "nfc/hierarchy.hpp"

#include <sstream>
#include <stdexcept>

#include "nfc/crossings.hpp"
#include "nfc/dynamics.hpp"

namespace nfc::hierarchy {

OrderParamsCheck check_params(const OrderParams& p) {
  OrderParamsCheck r;
  Rat bound1 = p.eta / (p.eta + 1) * p.eta / p.d;
  for (std::size_t i = 0; i < p.s.size() && i < p.c.size(); ++i) {
    if (!(make_rat(p.s[i], p.c[i]) < bound1)) {
      r.cs1_ok = false;
      r.cs1_fail = (long long)i + 1;
      break;
    }
  }
  Rat bound2 = p.eta / p.K1();
  for (std::size_t i = 0; i + 1 < p.c.size(); ++i) {
    if (!(make_rat(p.c[i], p.c[i + 1]) < bound2)) {
      r.cs2_ok = false;
      r.cs2_fail = (long long)i + 1;
      break;
    }
  }
  return r;
}

std::vector<PieceHole> pieces_and_holes(const IntervalSet& F, Interval I) {
  std::vector<PieceHole> out;
  if (I.empty()) return out;
  long long at = I.lo;
  for (const auto& f : F) {
    Interval c = intersect(f, I);
    if (c.empty()) continue;
    if (c.lo > at) out.push_back({false, {at, c.lo - 1}});
    out.push_back({true, c});
    at = c.hi + 1;
    if (at > I.hi) break;
  }
  if (at <= I.hi) out.push_back({false, {at, I.hi}});
  return out;
}

namespace {

// Clauses shared by order 1 (on F itself) and the recursive step (on a
// witness): every hole of S cap I has size <= s, and two consecutive
// holes are separated by a piece of size >= c.
std::optional<OrderDiag> hole_clauses(const IntervalSet& S, Interval I,
                                      long long c, long long s, int level) {
  auto ph = pieces_and_holes(S, I);
  for (std::size_t i = 0; i < ph.size(); ++i) {
    if (!ph[i].piece && ph[i].iv.size() > s)
      return OrderDiag{false, level, "hole larger than s", ph[i].iv};
    if (ph[i].piece && i > 0 && i + 1 < ph.size() && ph[i].iv.size() < c)
      return OrderDiag{false, level, "piece between holes smaller than c",
                       ph[i].iv};
  }
  return std::nullopt;
}

OrderDiag check_order_rec(const IntervalSet& F, Interval I, int level,
                          const OrderParams& p,
                          const std::vector<IntervalSet>& witnesses,
                          std::size_t w) {
  if (I.empty()) return {true, level, "", {}};
  if ((std::size_t)level > p.c.size() || (std::size_t)level > p.s.size())
    throw std::invalid_argument("check_order: c/s sequences too short");
  long long c = p.c[(std::size_t)level - 1];
  long long s = p.s[(std::size_t)level - 1];
  if (level == 1) {
    if (auto d = hole_clauses(F, I, c, s, 1)) return *d;
    return {true, 1, "", {}};
  }
  if (w >= witnesses.size())
    throw std::invalid_argument("check_order: missing witness for level " +
                                std::to_string(level));
  const IntervalSet& W = witnesses[w];
  if (!subset_of(restrict_to(F, I), W))
    return {false, level, "malformed witness: F not contained in F'", I};
  if (auto d = hole_clauses(W, I, c, s, level)) return *d;
  for (const auto& ph : pieces_and_holes(W, I)) {
    if (!ph.piece) continue;
    OrderDiag d = check_order_rec(F, ph.iv, level - 1, p, witnesses, w + 1);
    if (!d.ok) return d;
  }
  return {true, level, "", {}};
}

}  // namespace

OrderDiag check_order(const IntervalSet& F, Interval I, int ell,
                      const OrderParams& p,
                      const std::vector<IntervalSet>& witnesses) {
  if (ell < 1) throw std::invalid_argument("check_order: ell >= 1");
  return check_order_rec(F, I, ell, p, witnesses, 0);
}

OrbitOrderInstance witnesses_from_orbit(const TowerSystem& sys,
                                        dynamics::Point xi, long long ellbar,
                                        int ell, Interval I, const Rat& eta) {
  const auto& cp = sys.params();
  if (ellbar < 1 || ellbar + ell > (long long)cp.n_seq.size())
    throw std::out_of_range("witnesses_from_orbit: stages not covered");
  OrbitOrderInstance inst;
  inst.params.d = 1;
  inst.params.eta = eta;
  for (int m = 1; m <= ell; ++m) {
    long long li = ellbar + m - 1;
    int stage = (int)cp.n_seq[(std::size_t)li - 1];
    int k = params::k_of(cp, li);
    inst.params.c.push_back((long long)sys.height(stage));
    inst.params.s.push_back((long long)sys.height(stage - k) + 1);
  }

  dynamics::ProductPoint x{{xi}};
  int n_top = (int)cp.n_seq[(std::size_t)(ellbar + ell) - 1];
  // climbs into tower n_top along I: in the tower throughout with no
  // passage through the top, i.e. I sits inside one occurrence block
  auto cross = crossings::crossing_containing(sys, x, n_top, I.lo);
  inst.climb_ok = cross.has_value() && cross->contains(I);
  if (!inst.climb_ok) return inst;

  for (int m = ell; m >= 1; --m) {
    int stage = (int)cp.n_seq[(std::size_t)(ellbar + m - 1) - 1];
    IntervalSet vs;
    bool open = false;
    long long start = 0;
    for (long long j = I.lo; j <= I.hi; ++j) {
      bool in = sys.level_at(xi.trunc, xi.idx + j, stage).has_value();
      if (in && !open) {
        open = true;
        start = j;
      } else if (!in && open) {
        vs.push_back({start, j - 1});
        open = false;
      }
    }
    if (open) vs.push_back({start, I.hi});
    if (m == 1)
      inst.F = std::move(vs);
    else
      inst.witnesses.push_back(std::move(vs));  // coarsest (level ell) first
  }
  return inst;
}

LemmaBoundsReport check_lemma_bounds(const std::vector<IntervalSet>& F,
                                     Interval I, int ell, const OrderParams& p,
                                     long long c) {
  LemmaBoundsReport rep;
  rep.flags = check_params(p);
  if (F.empty()) {
    rep.precondition_violations.push_back("no sets given");
    return rep;
  }
  if ((std::size_t)ell > p.c.size()) {
    rep.precondition_violations.push_back("c sequence shorter than ell");
    return rep;
  }
  if (!(Rat(BigInt((long)I.size())) >=
        p.eta * Rat(BigInt((long)p.c[(std::size_t)ell - 1]))))
    rep.precondition_violations.push_back("|I| < eta c_ell");

  IntervalSet inter = restrict_to(F[0], I);
  for (std::size_t i = 1; i < F.size(); ++i) {
    IntervalSet next;
    std::size_t a = 0, b = 0;
    const IntervalSet& B = F[i];
    while (a < inter.size() && b < B.size()) {
      Interval cc = intersect(inter[a], B[b]);
      if (!cc.empty()) next.push_back(cc);
      if (inter[a].hi < B[b].hi)
        ++a;
      else
        ++b;
    }
    inter = normalize(std::move(next));
  }

  rep.intersection = total_size(inter);
  rep.density = I.size() > 0 ? make_rat(rep.intersection, I.size()) : Rat(0);
  rep.density_bound = pow_rat(Rat(1) - p.eta, 2 * (unsigned long)ell);
  rep.density_ok = rep.density >= rep.density_bound;

  for (const auto& ph : pieces_and_holes(inter, I))
    if (ph.piece && ph.iv.size() <= c) rep.small_mass += ph.iv.size();
  rep.proportion =
      rep.intersection > 0 ? make_rat(rep.small_mass, rep.intersection) : Rat(0);

  Rat sum = make_rat(c, p.c[0]);
  Rat om = Rat(1) - p.eta;
  for (int m = 1; m < ell; ++m) {
    Rat term = make_rat(p.c[(std::size_t)m - 1], p.c[(std::size_t)m]) /
               pow_rat(om, 2 * (unsigned long)(m + 1));
    sum += term;
  }
  rep.proportion_bound = p.K1() * sum;
  rep.proportion_ok = rep.proportion <= rep.proportion_bound;
  return rep;
}

SyntheticInstance random_order_instance(int ell, const OrderParams& p,
                                        Interval I, std::mt19937_64& rng) {
  if (ell < 1 || (std::size_t)ell > p.c.size() ||
      (std::size_t)ell > p.s.size())
    throw std::invalid_argument("random_order_instance: bad ell");
  SyntheticInstance inst;
  inst.witnesses.assign((std::size_t)std::max(0, ell - 1), {});

  // Lay a (c_m, s_m)-pattern on iv, recurse into the pieces.
  auto gen = [&](auto&& self, int level, Interval iv) -> IntervalSet {
    long long c = p.c[(std::size_t)level - 1];
    long long s = p.s[(std::size_t)level - 1];
    IntervalSet pieces;
    if (iv.size() < 2 * c + 2) {
      pieces.push_back(iv);  // degenerate: no room for a hole
    } else {
      long long at = iv.lo;
      bool first = true;
      while (at <= iv.hi) {
        long long remain = iv.hi - at + 1;
        if (remain < 2 * c + 2) {
          pieces.push_back({at, iv.hi});
          break;
        }
        long long plen =
            c + (long long)dynamics::uniform_u64(rng, (std::uint64_t)c + 1);
        plen = std::min(plen, remain);
        pieces.push_back({at, at + plen - 1});
        at += plen;
        if (at > iv.hi) break;
        long long hmax = std::min<long long>(s, iv.hi - at);
        if (hmax >= 1) {
          long long hlen =
              1 + (long long)dynamics::uniform_u64(rng, (std::uint64_t)hmax);
          at += hlen;
        }
        (void)first;
        first = false;
      }
    }
    if (level == 1) return pieces;
    IntervalSet& wit = inst.witnesses[(std::size_t)(ell - level)];
    for (const auto& pc : pieces) wit.push_back(pc);
    IntervalSet f;
    for (const auto& pc : pieces) {
      IntervalSet sub = self(self, level - 1, pc);
      f.insert(f.end(), sub.begin(), sub.end());
    }
    return f;
  };
  inst.F = normalize(gen(gen, ell, I));
  for (auto& w : inst.witnesses) w = normalize(std::move(w));
  return inst;
}

}  // namespace nfc::hierarchy
