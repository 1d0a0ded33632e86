#pragma once

#include <cstdint>

namespace sprayscope::detail {

// Square-and-multiply; shared by the scalar evaluator and the jet engine so
// that both produce identical order-0 values.
template <typename T>
T int_power(const T& base, std::uint64_t exponent, const T& one) {
  T result = one;
  T factor = base;
  bool first = true;
  while (exponent != 0) {
    if (exponent & 1U) {
      result = first ? factor : result * factor;
      first = false;
    }
    exponent >>= 1U;
    if (exponent != 0) factor = factor * factor;
  }
  return result;
}

}  // namespace sprayscope::detail
