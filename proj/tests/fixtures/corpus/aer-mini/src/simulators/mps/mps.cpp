#include <complex>
#include <cstdint>
#include <vector>

namespace MPS {

using cvector_t = std::vector<std::complex<double>>;

cvector_t full_statevector(uint64_t num_qubits) {
  const uint64_t length = 1ULL << num_qubits;
  cvector_t statevector(length);
  statevector[0] = 1.0;
  return statevector;
}

}  // namespace MPS
