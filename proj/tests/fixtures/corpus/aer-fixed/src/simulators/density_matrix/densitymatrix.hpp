#ifndef _qv_density_matrix_hpp_
#define _qv_density_matrix_hpp_

#include <stdexcept>

#include "simulators/unitary/unitarymatrix.hpp"

namespace QV {

constexpr size_t MAX_DENSITY_QUBITS = 31;

template <class data_t = double>
class DensityMatrix : public UnitaryMatrix<data_t> {
public:
  using BaseVector = QubitVector<data_t>;

  void set_num_qubits(size_t num_qubits) override {
    if (num_qubits > MAX_DENSITY_QUBITS) {
      throw std::invalid_argument("DensityMatrix: too many qubits");
    }
    num_qubits_ = num_qubits;
    BaseVector::set_num_qubits(2 * num_qubits);
  }

protected:
  size_t num_qubits_ = 0;
};

}  // namespace QV

#endif
