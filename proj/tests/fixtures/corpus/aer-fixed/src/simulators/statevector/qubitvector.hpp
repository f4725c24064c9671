#ifndef _qv_qubit_vector_hpp_
#define _qv_qubit_vector_hpp_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace QV {

static const std::array<uint64_t, 64> BITS = {1, 2, 4, 8, 16, 32, 64, 128};

template <typename data_t = double>
class QubitVector {
public:
  virtual void set_num_qubits(size_t num_qubits);

protected:
  void allocate_mem(uint64_t) {}
  void free_mem() {}
  void free_checkpoint() {}

  size_t num_qubits_ = 0;
  uint64_t data_size_ = 0;
};

template <typename data_t>
void QubitVector<data_t>::set_num_qubits(size_t num_qubits) {
  if (num_qubits >= 64)
    throw std::invalid_argument(
      "QubitVector: num_qubits=" + std::to_string(num_qubits) + " >= 64 not supported"
    );
  free_checkpoint();
  if (num_qubits != num_qubits_) { free_mem(); }
  data_size_ = BITS[num_qubits];
  allocate_mem(data_size_);
  num_qubits_ = num_qubits;
}

}  // namespace QV

#endif
