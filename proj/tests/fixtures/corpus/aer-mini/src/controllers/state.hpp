#ifndef _aer_base_state_hpp_
#define _aer_base_state_hpp_

#include "framework/types.hpp"

namespace AER {

template <class qreg_t>
class State {
public:
  virtual ~State() = default;

  virtual void initialize_qreg(uint_t num_qubits) { qreg_.set_num_qubits(num_qubits); }

protected:
  qreg_t qreg_;
};

}  // namespace AER

#endif
