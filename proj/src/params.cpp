#include "nfc/params.hpp"

#include <sstream>
#include <stdexcept>

namespace nfc::params {

ConstructionParams default_params() {
  ConstructionParams p;
  p.n_seq = {3, 8, 15, 24, 35};
  p.l_seq = {1, 2, 8, 44};
  p.trunc = 9;
  p.d = 1;
  return p;
}

namespace {

void push(ValidationReport& r, std::string name, long long index, bool ok,
          std::string detail) {
  r.conditions.push_back({std::move(name), index, ok, std::move(detail)});
}

}  // namespace

ValidationReport validate(const ConstructionParams& p) {
  ValidationReport rep;
  if (p.n_seq.empty() || p.l_seq.empty()) {
    push(rep, "nonempty", -1, false, "no stages");
    rep.accepted = false;
    return rep;
  }

  bool inc = true;
  for (std::size_t i = 0; i + 1 < p.n_seq.size(); ++i)
    if (p.n_seq[i] >= p.n_seq[i + 1]) inc = false;
  push(rep, "n_seq_increasing", -1, inc && p.n_seq[0] >= 1, "");

  bool linc = p.l_seq[0] == 1;
  for (std::size_t i = 0; i + 1 < p.l_seq.size(); ++i)
    if (p.l_seq[i] >= p.l_seq[i + 1]) linc = false;
  push(rep, "l_seq_starts_at_1_increasing", -1, linc, "");

  // (1 + 7^-k)^gap >= 2  <=>  (7^k + 1)^gap >= 2 * 7^(k*gap)
  for (std::size_t k = 0; k + 1 < p.l_seq.size(); ++k) {
    long long gap = p.l_seq[k + 1] - p.l_seq[k];
    bool ok = false;
    std::string detail;
    if (gap > 0) {
      BigInt lhs = pow_bigint(pow_bigint(7, k) + 1, (unsigned long)gap);
      BigInt rhs = 2 * pow_bigint(7, (unsigned long)(k * gap));
      ok = lhs >= rhs;
      if (!ok) {
        std::ostringstream os;
        os << "(1+7^-" << k << ")^" << gap << " < 2";
        detail = os.str();
      }
    }
    push(rep, "growth_lk", (long long)k, ok, detail);
  }

  // n_l > n_{l-1} + 2 l, with n_0 taken as 0.
  for (std::size_t i = 0; i < p.n_seq.size(); ++i) {
    long long l = (long long)i + 1;
    long long prev = i == 0 ? 0 : p.n_seq[i - 1];
    bool ok = p.n_seq[i] > prev + 2 * l;
    std::string detail;
    if (!ok) {
      std::ostringstream os;
      os << "n_" << l << " = " << p.n_seq[i] << " is not > " << prev << " + "
         << 2 * l;
      detail = os.str();
    }
    push(rep, "gap_nl", l, ok, detail);
  }

  Rat eta = p.effective_eta();
  bool eta_ok = eta > 0 && eta < make_rat(1, 100 * (long long)p.d) &&
                (Rat(1) - eta) * (Rat(1) - eta) > make_rat(1, 2);
  push(rep, "eta_small", -1, eta_ok,
       eta_ok ? "" : "need 0 < eta < 1/(100 d) and (1-eta)^2 > 1/2");

  bool trunc_ok = p.trunc >= 0 && p.trunc <= p.n_seq.back() + 1;
  push(rep, "trunc_covered", -1, trunc_ok,
       trunc_ok ? "" : "trunc exceeds the last covered special stage + 1");

  bool d_ok = p.d >= 1;
  push(rep, "d_positive", -1, d_ok, "");

  rep.accepted = true;
  for (const auto& c : rep.conditions)
    if (!c.ok) rep.accepted = false;
  return rep;
}

int k_of(const ConstructionParams& p, long long l) {
  if (l < 1) throw std::out_of_range("k_of: l must be >= 1");
  if (p.l_seq.empty() || l >= p.l_seq.back())
    throw std::out_of_range("k_of: l_seq exhausted at l=" + std::to_string(l));
  int k = 0;
  for (std::size_t i = 0; i + 1 < p.l_seq.size(); ++i)
    if (p.l_seq[i] <= l && l < p.l_seq[i + 1]) k = (int)i;
  return k;
}

Rat DerivedConstants::theta2(unsigned long M) const {
  if (M == 0) throw std::invalid_argument("theta2: M must be positive");
  BigInt steps = pow_bigint(7, (unsigned long)p2) * BigInt((unsigned long)M);
  if (!steps.fits_ulong_p())
    throw std::out_of_range("theta2: exponent 7^p2*M too large");
  unsigned long e = steps.get_ui();
  return pow_rat(theta1, e) / Rat(steps + 2);
}

DerivedConstants constants(const ConstructionParams& p) {
  auto rep = validate(p);
  if (!rep.accepted) {
    auto* f = rep.first_failure();
    throw std::invalid_argument("constants: invalid params (" +
                                (f ? f->name : std::string("?")) + ")");
  }
  DerivedConstants c;
  c.eta = p.effective_eta();
  c.epsilon = c.eta / 2;

  // smallest c with (c-1)/c > 1-epsilon  <=>  c > 1/epsilon
  BigInt inv_floor = c.epsilon.get_den() / c.epsilon.get_num();
  c.c_min = (long long)BigInt(inv_floor + 1).get_si();

  c.p1 = 1;
  while (!(pow_bigint(3, (unsigned long)c.p1) > 2 * p.d + 1 && c.p1 > p.d))
    ++c.p1;

  // smallest p with 3^-p < eta/3  <=>  3^p > 3/eta
  Rat three_over_eta = Rat(3) / c.eta;
  c.p2 = 1;
  while (!(Rat(pow_bigint(3, (unsigned long)c.p2)) > three_over_eta)) ++c.p2;

  Rat one(1);
  c.K1 = (one + 2 / c.eta) / (one - c.eta) * p.d;
  c.K2 = 6 * c.K1;
  Rat om = one - c.eta;
  c.theta1 = om / (2 * p.d / pow_rat(om, 2 * (unsigned long)p.d) + one);
  return c;
}

}  // namespace nfc::params
