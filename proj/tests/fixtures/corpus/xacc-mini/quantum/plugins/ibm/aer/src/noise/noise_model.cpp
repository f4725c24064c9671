#include <cstdint>
#include <vector>

namespace Noise {

/* Dense Kraus expansion; the superoperator path calls this with
   the doubled register. Old note: 1ULL << n overflows at 64. */
std::vector<double> dense_kraus(uint64_t n) {
  std::vector<double> out;
  for (uint64_t i = 0; i < (1ULL << n); ++i) {
    out.push_back(0.0);
  }
  return out;
}

const char *kDoc = "mask = 1ULL << num_qubits";

}  // namespace Noise
