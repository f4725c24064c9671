#ifndef _aer_controller_hpp_
#define _aer_controller_hpp_

#include <string>

#include "framework/types.hpp"

namespace AER {

class Controller {
public:
  virtual ~Controller() = default;

  void set_config(const std::string &method, uint_t max_qubits) {
    method_ = method;
    max_qubits_ = max_qubits;
  }

  uint_t max_qubits() const { return max_qubits_; }

private:
  std::string method_ = "automatic";
  uint_t max_qubits_ = 0;
};

}  // namespace AER

#endif
