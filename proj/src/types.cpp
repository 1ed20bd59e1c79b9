#include "eqaudit/types.hpp"

#include <algorithm>

namespace eqaudit {

std::string to_string(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

u128 checked_add(u128 a, u128 b) {
  const u128 sum = a + b;
  if (sum < a) throw NumericalError("128-bit counter overflow in addition");
  return sum;
}

u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > ~u128{0} / a)
    throw NumericalError("128-bit counter overflow in multiplication");
  return a * b;
}

u128 checked_pow(u128 base, unsigned exponent) {
  u128 result = 1;
  for (unsigned i = 0; i < exponent; ++i) result = checked_mul(result, base);
  return result;
}

}  // namespace eqaudit
