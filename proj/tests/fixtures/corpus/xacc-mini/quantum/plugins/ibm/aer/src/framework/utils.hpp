#ifndef _aer_framework_utils_hpp_
#define _aer_framework_utils_hpp_

#include <cstdint>

#include "framework/types.hpp"

namespace AER {
namespace Utils {

// Index of the highest set bit; callers pass BITS[num_qubits] values.
inline uint_t hamming_weight(uint_t x) {
  uint_t count = 0;
  while (x) {
    count += x & 1u;
    x >>= 1;
  }
  return count;
}

inline bool is_power_of_two(uint_t x) { return x && !(x & (x - 1)); }

}  // namespace Utils
}  // namespace AER

#endif
