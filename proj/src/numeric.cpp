#include "nfc/numeric.hpp"

namespace nfc {

std::string rat_decimal(const Rat& q, int digits) {
  BigInt num = q.get_num();
  BigInt den = q.get_den();
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  BigInt ip = num / den;
  BigInt rem = num - ip * den;
  std::string out = sign + ip.get_str();
  if (rem == 0) return out;
  out += '.';
  std::string frac;
  for (int i = 0; i < digits && rem != 0; ++i) {
    rem *= 10;
    BigInt d = rem / den;
    frac += d.get_str();
    rem -= d * den;
  }
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return out + frac;
}

}  // namespace nfc
