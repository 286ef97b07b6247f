#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfc/numeric.hpp"

namespace nfc::params {

// Construction parameters: the whole transformation is a pure function of
// these. n_seq lists the special stages n_1 < n_2 < ..., l_seq the block
// boundaries l_0 = 1 < l_1 < ... used by k(l), trunc is the largest tower
// built, d the Cartesian power, eta the smallness parameter.
struct ConstructionParams {
  std::vector<long long> n_seq;
  std::vector<long long> l_seq;
  int trunc = 9;
  int d = 1;
  std::optional<Rat> eta;  // empty = default 1/(128 d)

  Rat effective_eta() const {
    return eta ? *eta : make_rat(1, 128 * (long long)d);
  }
};

ConstructionParams default_params();

struct ConditionResult {
  std::string name;     // which condition
  long long index;      // failing k or l, -1 when not index-specific
  bool ok;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionResult> conditions;
  bool accepted = false;

  const ConditionResult* first_failure() const {
    for (const auto& c : conditions)
      if (!c.ok) return &c;
    return nullptr;
  }
};

// Checks every growth condition in exact arithmetic:
//   - l_seq starts at 1, both sequences strictly increasing;
//   - (1 + 7^-k)^(l_{k+1} - l_k) >= 2 for every covered k;
//   - n_l > n_{l-1} + 2 l for every l >= 1, with n_0 := 0;
//   - eta < 1/(100 d) and (1 - eta)^2 > 1/2;
//   - trunc buildable from the covered stages.
ValidationReport validate(const ConstructionParams& p);

// The unique k with l_k <= l < l_{k+1}. Pre: 1 <= l < l_seq.back().
int k_of(const ConstructionParams& p, long long l);

// Every constant the construction fixes from d and eta.
struct DerivedConstants {
  Rat eta;
  Rat epsilon;        // eta/2, so (1-epsilon)^2 > 1-eta always holds
  long long c_min;    // smallest c with (c-1)/c > 1-epsilon
  int p1;             // smallest p with 3^p > 2d+1 and p > d
  int p2;             // smallest p with 3^-p < eta/3
  Rat K1;             // (1 + 2/eta)/(1-eta) * d
  Rat K2;             // 6 K1 (geometric-series bound; 4 K1 would do)
  Rat theta1;         // (1-eta) * (2d/(1-eta)^{2d} + 1)^{-1}

  Rat theta2(unsigned long M) const;  // theta1^{7^{p2} M} / (7^{p2} M + 2)
};

DerivedConstants constants(const ConstructionParams& p);

}  // namespace nfc::params
