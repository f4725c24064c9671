#include <iterator>
#include <stdexcept>

#include "qai/rule.hpp"
#include "qai/verifier.hpp"

namespace qai {

namespace {

// Identifiers that carry a qubit count in the C++ simulators.
constexpr const char* kQubitCount = R"((?:num_qubits|n_qubits|nqubits|nqubit|qubits|n)_?)";

// A power-of-two exponent: 2**x, with x a plain or dotted name.
constexpr const char* kPow2 = R"(2\s*\*\*\s*[A-Za-z_][\w.]*)";

Rule make(std::string id, int cwe, Severity severity, LanguageScope scope, const std::string& re,
          std::vector<ContextPredicate> predicates, std::optional<std::string> obligation,
          std::string description) {
  return Rule{
      std::move(id),         cwe, severity, scope, Pattern(re), std::move(predicates), std::move(obligation),
      std::move(description)};
}

std::vector<Rule> memory_rules() {
  const std::string count = kQubitCount;
  const std::string pow2 = kPow2;
  return {
      // Class I: C++ integer arithmetic on the qubit count.
      make("QAI-001", 125, Severity::Critical, LanguageScope::Cpp,
           R"(\b(?:BITS|MASKS)\s*\[\s*)" + count + R"(\s*\])", {}, "QAI-001",
           "fixed 64-entry table indexed by an unchecked qubit count"),
      make("QAI-002", 190, Severity::Critical, LanguageScope::Cpp,
           R"(<<\s*\(\s*(?:[A-Za-z_][\w.]*\s*\*\s*2|2\s*\*\s*[A-Za-z_][\w.]*)\s*\))", {}, "QAI-002",
           "shift amount derived from twice the qubit count"),
      make("QAI-003", 190, Severity::Critical, LanguageScope::Cpp,
           R"(\bset_num_qubits\s*\(\s*(?:2\s*\*\s*[A-Za-z_]\w*|[A-Za-z_]\w*\s*\*\s*2)\s*\))", {}, "QAI-003",
           "qubit count doubled before dispatch to the base allocator"),
      make("QAI-004", 190, Severity::High, LanguageScope::Cpp, R"(<<\s*\(\s*[A-Za-z_][\w.]*\s*\+\s*1\s*\))",
           {}, "QAI-004", "shift by the qubit count plus one"),
      make("QAI-005", 190, Severity::High, LanguageScope::Cpp,
           R"(\b1(?:ULL|UL|LL|U|L)?\s*<<\s*)" + count + R"(\b(?!\s*[*+\-]))", {}, "QAI-005",
           "direct 1 << n shift, including variable-length array bounds"),

      // Class II: Python exponential allocation.
      make("QAI-PY-001", 400, Severity::High, LanguageScope::Python,
           R"(\b(?:np|numpy|jnp|torch|tf|paddle|cp|cupy)\.(?:zeros|ones|empty)\s*\(\s*)" + pow2 +
               R"(|\]\s*\*\s*\(?\s*)" + pow2,
           {}, "QAI-PY-001", "statevector-sized allocation of 2**n elements"),
      make("QAI-PY-002", 400, Severity::High, LanguageScope::Python, R"(\brange\s*\(\s*)" + pow2, {},
           "QAI-PY-002", "loop over 2**n iterations"),
      make("QAI-PY-003", 400, Severity::High, LanguageScope::Python,
           R"(2\s*\*\*\s*\(\s*(?:2\s*\*\s*[A-Za-z_][\w.]*|[A-Za-z_][\w.]*\s*\*\s*2)\s*\))", {}, "QAI-PY-003",
           "density-matrix exponent 2**(2n)"),
      make("QAI-PY-004", 400, Severity::High, LanguageScope::Python,
           R"(\.(?:zeros|ones|empty|full|eye|identity)\s*\([^)]*?[\[(]\s*)" + pow2 +
               R"(|\bshape\s*=\s*[\[(]\s*)" + pow2,
           {}, "QAI-PY-004", "2**n inside an array shape"),
      make("QAI-PY-005", 400, Severity::Medium, LanguageScope::Python,
           R"(^\s*[A-Za-z_][\w.]*\s*=\s*2\s*\*\*\s*\(?\s*[A-Za-z_][\w.]*\s*\)?\s*$)", {}, std::nullopt,
           "exponential size bound to a name with no allocation on the line"),
  };
}

std::vector<Rule> deserialization_rules() {
  using P = ContextPredicate;
  return {
      make("QAI-DS-001", 502, Severity::Critical, LanguageScope::Python, R"(\b(?:c?[Pp]ickle)\.loads?\s*\()",
           {}, std::nullopt, "pickle deserialization executes attacker-supplied code"),
      make("QAI-DS-002", 502, Severity::Critical, LanguageScope::Python, R"(\bdill\.loads?\s*\()", {},
           std::nullopt, "dill deserialization inherits pickle code execution"),
      make("QAI-DS-003", 502, Severity::Critical, LanguageScope::Python, R"(\bjoblib\.load\s*\()", {},
           std::nullopt, "joblib.load uses pickle underneath"),
      make("QAI-DS-004", 502, Severity::High, LanguageScope::Python, R"(\btorch\.load\s*\()",
           {P::NoWeightsOnlyFlag}, std::nullopt, "torch.load without weights_only=True"),
      make("QAI-DS-005", 502, Severity::High, LanguageScope::Python, R"(\byaml\.load\s*\()",
           {P::NoSafeLoader}, std::nullopt, "yaml.load without a safe loader"),
      make("QAI-DS-006", 94, Severity::High, LanguageScope::Python, R"((?<![\w.])eval\s*\()",
           {P::CallsiteNotDefinition}, std::nullopt, "eval on a runtime string"),
  };
}

std::vector<Rule> qasm_rules() {
  using P = ContextPredicate;
  return {
      make("QAI-QA-001", 77, Severity::Critical, LanguageScope::Python,
           R"(\b(?:from_qasm_str|circuit_from_qasm|from_qasm)\s*\()", {P::ArgNotStringLiteral}, "QAI-QA-001",
           "QASM string sink called with a non-literal argument"),
      make("QAI-QA-002", 22, Severity::Critical, LanguageScope::Python, R"(\bfrom_qasm_file\s*\()",
           {P::ArgNotStringLiteral}, "QAI-QA-001", "QASM file sink called with a non-literal path"),
      make("QAI-QA-003", 77, Severity::High, LanguageScope::Python,
           R"(^\s*def\s+(?:from_qasm_str|from_qasm_file|from_qasm|circuit_from_qasm)\s*\()", {}, "QAI-QA-001",
           "public QASM entry point accepts unsanitized input"),
  };
}

}  // namespace

RuleSet load_builtin_rules() {
  std::vector<Rule> all = memory_rules();
  for (auto* group : {deserialization_rules, qasm_rules}) {
    auto more = group();
    std::move(more.begin(), more.end(), std::back_inserter(all));
  }
  const auto& registry = builtin_obligations();
  for (const auto& r : all) {
    if (r.obligation && !registry.find(*r.obligation)) {
      throw std::logic_error("rule " + r.id + " links unknown obligation " + *r.obligation);
    }
  }
  const std::size_t count = all.size();
  RuleSet set(std::move(all), "builtin");
  if (set.size() != count) throw std::logic_error("duplicate builtin rule id");
  return set;
}

}  // namespace qai
