#ifndef _qv_qubit_vector_hpp_
#define _qv_qubit_vector_hpp_

#include <array>
#include <cstdint>
#include <cstdlib>

#include "framework/types.hpp"

namespace QV {

// Powers of two up to 2^62, indexed by qubit count.
static const std::array<uint64_t, 64> BITS = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024,
                                              2048, 4096, 8192, 16384, 32768, 65536};

template <typename data_t = double>
class QubitVector {
public:
  QubitVector() = default;
  virtual ~QubitVector() { free_mem(); }

  virtual void set_num_qubits(size_t num_qubits);
  size_t num_qubits() const { return num_qubits_; }
  uint64_t size() const { return data_size_; }

protected:
  void allocate_mem(uint64_t data_size);
  void free_mem();
  void free_checkpoint() {}

  size_t num_qubits_ = 0;
  uint64_t data_size_ = 0;
  data_t *data_ = nullptr;
};

template <typename data_t>
void QubitVector<data_t>::set_num_qubits(size_t num_qubits) {
  free_checkpoint();
  if (num_qubits != num_qubits_) { free_mem(); }
  data_size_ = BITS[num_qubits];  // no bounds check on the 64-entry table
  allocate_mem(data_size_);
  num_qubits_ = num_qubits;
}

template <typename data_t>
void QubitVector<data_t>::allocate_mem(uint64_t data_size) {
  if (data_ == nullptr) {
    void *data = nullptr;
    posix_memalign(&data, 64, sizeof(data_t) * data_size);
    data_ = reinterpret_cast<data_t *>(data);
  }
}

template <typename data_t>
void QubitVector<data_t>::free_mem() {
  if (data_) {
    free(data_);
    data_ = nullptr;
  }
}

}  // namespace QV

#endif
