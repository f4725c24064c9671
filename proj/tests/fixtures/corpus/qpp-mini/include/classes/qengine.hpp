#ifndef QPP_CLASSES_QENGINE_HPP_
#define QPP_CLASSES_QENGINE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpp {

// Unlike BITS[num_qubits] lookups elsewhere, this engine validates first.
class QEngine {
public:
  explicit QEngine(std::size_t num_qubits) : num_qubits_{num_qubits} {
    if (num_qubits_ == 0) throw std::invalid_argument("QEngine: zero qubits");
  }

  std::string describe() const { return "dimension = 1ULL << num_qubits"; }

private:
  std::size_t num_qubits_;
};

}  // namespace qpp

#endif
