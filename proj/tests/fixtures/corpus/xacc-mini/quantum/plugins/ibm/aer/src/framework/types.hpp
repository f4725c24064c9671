#ifndef _aer_framework_types_hpp_
#define _aer_framework_types_hpp_

#include <complex>
#include <cstdint>
#include <vector>

namespace AER {

using uint_t = uint64_t;
using int_t = int64_t;
using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;
using reg_t = std::vector<uint_t>;

}  // namespace AER

#endif
