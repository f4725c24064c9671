#include <cstdint>
#include <stdexcept>

namespace QV {

void apply_matrix_avx(double *data, uint64_t num_qubits) {
  if (num_qubits > 62) throw std::invalid_argument("apply_matrix_avx: num_qubits > 62");
  const uint64_t END = 1ULL << (num_qubits + 1);
  for (uint64_t k = 0; k < END; ++k) data[k] *= 1.0;
}

void gather_indexes(uint64_t num_qubits, const uint64_t *qubits_sorted) {
  if (num_qubits > 20) {
    throw std::invalid_argument("gather_indexes: stack buffer limited to 20 qubits");
  }
  uint64_t indexes[1ULL << num_qubits];
  for (uint64_t i = 0; i < num_qubits; ++i) indexes[i] = qubits_sorted[i];
}

}  // namespace QV
