#include <algorithm>

#include "qai/verifier.hpp"

namespace qai {

namespace {

Obligation bv(std::string id, std::string pattern, std::string_view formula, std::uint64_t witness,
              std::string note) {
  return {std::move(id),         std::move(pattern), parse_formula(formula),
          Verdict::sat(witness), std::move(note),    false};
}

Obligation boolean(std::string id, std::string pattern, BooleanFormula formula, Verdict expected,
                   std::string note, bool reconstructed) {
  return {std::move(id), std::move(pattern), formula, expected, std::move(note), reconstructed};
}

ObligationRegistry make_builtin() {
  const BooleanAssignment reachable{true, false};
  ObligationRegistry reg;
  reg.obligations = {
      bv("QAI-001", "BITS[n]", "n >= 64", 64, "64-entry table indexed by the qubit count"),
      bv("QAI-002", "1ULL << (2*n)", "2*n >= 64", 32, "shift amount 2n reaches the bit width"),
      bv("QAI-003", "set_num_qubits(2*n)", "n < 64 && 2*n >= 64", 32,
         "in-range qubit count doubled into BITS[2n]"),
      bv("QAI-004", "1ULL << (n+1)", "n + 1 >= 64", 63, "shift amount n+1 reaches the bit width"),
      bv("QAI-005", "1ULL << n", "n >= 64", 64, "direct shift by the qubit count"),
      bv("QAI-PY-001", "np.zeros(2**n)", "n >= 40", 40, "statevector allocation of 16 TB"),
      bv("QAI-PY-002", "range(2**n)", "n >= 30", 30, "loop of 10^9 iterations"),
      bv("QAI-PY-003", "2**(2*n) density matrix", "n < 64 && 2*n >= 64", 32,
         "density-matrix exponent overflows 64 bits"),
      bv("QAI-PY-004", "shape=(2**n,...)", "n >= 30", 30, "matrix dimension 2^n"),
      boolean("QAI-QA-001", "from_qasm_str(user_input)", BooleanFormula{true, false}, Verdict::sat(reachable),
              "unsanitized QASM string reaches the parser", false),
      boolean("QAI-QA-001-mitigated", "from_qasm_str(allowlisted)", BooleanFormula{std::nullopt, true},
              Verdict::unsat(), "allowlist validator in front of the parser", false),
      // The next two rows pad the published 13-row table; the reachability
      // model is the QASM one applied to an attacker-supplied pickle file.
      boolean("QAI-DS-001", "pickle.load(untrusted)", BooleanFormula{true, false}, Verdict::sat(reachable),
              "attacker-supplied file reaches pickle.load", true),
      boolean("QAI-DS-001-mitigated", "pickle.load(verified)", BooleanFormula{std::nullopt, true},
              Verdict::unsat(), "file integrity verified before load", true),
  };
  std::sort(reg.obligations.begin(), reg.obligations.end(),
            [](const Obligation& a, const Obligation& b) { return a.id < b.id; });
  return reg;
}

}  // namespace

const ObligationRegistry& builtin_obligations() {
  static const ObligationRegistry registry = make_builtin();
  return registry;
}

}  // namespace qai
