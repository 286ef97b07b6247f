#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace nfc {

// Level indices inside a tower. Heights stay below 2^126 for every
// truncation the library will accept, so a 128-bit integer is enough for
// index arithmetic; exact unbounded values (heights, measures, report
// ratios) use GMP.
using Index = __int128;

using BigInt = mpz_class;
using Rat = mpq_class;

inline std::string to_string(Index v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u > 0) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

inline Index index_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty index literal");
  std::size_t i = 0;
  bool neg = s[0] == '-';
  if (neg || s[0] == '+') i = 1;
  if (i == s.size()) throw std::invalid_argument("bad index literal: " + s);
  Index v = 0;
  const Index lim = std::numeric_limits<Index>::max() / 10;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("bad index literal: " + s);
    if (v > lim) throw std::out_of_range("index literal too large: " + s);
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

inline BigInt to_bigint(Index v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  BigInt hi((unsigned long)(u >> 64));
  BigInt res = (hi << 64) + BigInt((unsigned long)(u & ~0ULL));
  return neg ? BigInt(-res) : res;
}

inline BigInt bigint_of(long long v) { return BigInt((long)v); }
inline Rat rat_of(long long v) { return Rat(BigInt((long)v)); }

// Throws if the value does not fit.
inline Index index_from_bigint(const BigInt& v) {
  bool neg = v < 0;
  BigInt a = abs(v);
  BigInt lim = BigInt(1) << 126;
  if (a >= lim) throw std::out_of_range("value exceeds 128-bit index range");
  BigInt hi = a >> 64;
  BigInt lo = a - (hi << 64);
  unsigned __int128 u =
      ((unsigned __int128)hi.get_ui() << 64) | (unsigned __int128)lo.get_ui();
  Index r = (Index)u;
  return neg ? -r : r;
}

inline Rat make_rat(const BigInt& num, const BigInt& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat make_rat(long long num, long long den) {
  return make_rat(BigInt((long)num), BigInt((long)den));
}

inline BigInt pow_bigint(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
  return make_rat(pow_bigint(base.get_num(), e), pow_bigint(base.get_den(), e));
}

inline std::string rat_string(const Rat& q) { return q.get_str(); }

// Fixed decimal rendering used by every report writer; keeps output
// byte-stable across runs.
std::string rat_decimal(const Rat& q, int digits = 12);

inline Index floor_div(Index a, Index b) {
  Index q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace nfc
