#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qai {

// ---------------------------------------------------------------------------
// Single-variable unsigned 64-bit constraints.
//
// Every term is affine in the qubit count n and evaluated modulo 2^64:
//   constant | n | c*n | n + c
// so it is stored uniformly as (coeff * n + offset) mod 2^64.
// ---------------------------------------------------------------------------

struct AffineTerm {
  std::uint64_t coeff = 0;
  std::uint64_t offset = 0;

  static constexpr AffineTerm constant(std::uint64_t c) noexcept { return {0, c}; }
  static constexpr AffineTerm variable() noexcept { return {1, 0}; }
  static constexpr AffineTerm scaled(std::uint64_t c) noexcept { return {c, 0}; }
  static constexpr AffineTerm shifted(std::uint64_t c) noexcept { return {1, c}; }

  constexpr std::uint64_t eval(std::uint64_t n) const noexcept { return coeff * n + offset; }
  constexpr bool is_constant() const noexcept { return coeff == 0; }

  friend constexpr bool operator==(const AffineTerm&, const AffineTerm&) = default;
};

enum class Cmp { Lt, Le, Ge, Gt, Eq };

std::string_view to_string(Cmp cmp) noexcept;

struct Comparison {
  AffineTerm lhs;
  Cmp op = Cmp::Eq;
  AffineTerm rhs;

  constexpr bool holds(std::uint64_t n) const noexcept {
    const std::uint64_t a = lhs.eval(n);
    const std::uint64_t b = rhs.eval(n);
    switch (op) {
      case Cmp::Lt:
        return a < b;
      case Cmp::Le:
        return a <= b;
      case Cmp::Ge:
        return a >= b;
      case Cmp::Gt:
        return a > b;
      case Cmp::Eq:
        return a == b;
    }
    return false;
  }

  friend constexpr bool operator==(const Comparison&, const Comparison&) = default;
};

/// Conjunction of comparisons over n. Never empty once parsed.
struct ConstraintFormula {
  std::vector<Comparison> conjuncts;

  bool holds(std::uint64_t n) const noexcept {
    for (const auto& c : conjuncts) {
      if (!c.holds(n)) return false;
    }
    return true;
  }

  /// ASCII rendering accepted by parse_formula, e.g. "n < 64 && 2*n >= 64".
  std::string to_string() const;
  /// Same formula with unicode operators, e.g. "n < 64 ∧ 2n ≥ 64".
  std::string to_pretty_string() const;

  friend bool operator==(const ConstraintFormula&, const ConstraintFormula&) = default;
};

class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(std::size_t column, const std::string& message);
  /// 1-based column of the offending character.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// Grammar: pred ("&&" pred)*; pred: term ("<"|"<="|">="|">"|"==") term;
/// term: NUM | "n" | NUM "*" "n" | "n" "*" NUM | "n" "+" NUM | NUM "+" "n".
/// NUM is decimal or 0x-prefixed hex. Throws FormulaSyntaxError.
ConstraintFormula parse_formula(std::string_view text);

// ---------------------------------------------------------------------------
// Two-variable injection reachability model:
//   attacker_controls_string AND NOT qasm_sanitized
// Either variable may be pinned to a constant.
// ---------------------------------------------------------------------------

struct BooleanFormula {
  std::optional<bool> attacker_controls_string;
  std::optional<bool> qasm_sanitized;

  std::string to_string() const;
  std::string to_pretty_string() const;

  friend bool operator==(const BooleanFormula&, const BooleanFormula&) = default;
};

struct BooleanAssignment {
  bool attacker_controls_string = false;
  bool qasm_sanitized = false;

  friend bool operator==(const BooleanAssignment&, const BooleanAssignment&) = default;
};

enum class SatStatus { Sat, Unsat };

std::string_view to_string(SatStatus s) noexcept;

struct Verdict {
  SatStatus status = SatStatus::Unsat;
  /// Set iff status == Sat for a ConstraintFormula: the least satisfying n.
  std::optional<std::uint64_t> witness;
  /// Set iff status == Sat for a BooleanFormula.
  std::optional<BooleanAssignment> assignment;

  static Verdict sat(std::uint64_t n) { return {SatStatus::Sat, n, std::nullopt}; }
  static Verdict sat(BooleanAssignment a) { return {SatStatus::Sat, std::nullopt, a}; }
  static Verdict unsat() { return {}; }

  bool is_sat() const noexcept { return status == SatStatus::Sat; }
  /// "64", "attacker_controls_string=true, qasm_sanitized=false" or "-".
  std::string witness_text() const;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Exact over the full 2^64 domain with wrap-around arithmetic. A SAT verdict
/// always carries the minimal witness.
Verdict solve(const ConstraintFormula& formula);

Verdict solve_boolean(const BooleanFormula& formula);

/// Least x >= 0 with lo <= (a*x + b) mod 2^64 <= hi, if any.
std::optional<std::uint64_t> min_affine_in_range(std::uint64_t a, std::uint64_t b, std::uint64_t lo,
                                                 std::uint64_t hi);

/// Same query for an arbitrary modulus m in [1, 2^64). Exposed for testing
/// against brute force at small moduli.
std::optional<std::uint64_t> min_affine_in_range_mod(std::uint64_t a, std::uint64_t b, std::uint64_t lo,
                                                     std::uint64_t hi, std::uint64_t m);

// ---------------------------------------------------------------------------
// Proof obligations.
// ---------------------------------------------------------------------------

struct Obligation {
  std::string id;
  /// Source pattern the obligation stands for, e.g. "np.zeros(2**n)".
  std::string pattern;
  std::variant<ConstraintFormula, BooleanFormula> formula;
  Verdict expected;
  std::string note;
  /// Registry-only rows that pad the published table; not linked from rules.
  bool reconstructed = false;
};

struct ObligationRegistry {
  std::vector<Obligation> obligations;

  const Obligation* find(std::string_view id) const noexcept;
};

/// The shipped registry, sorted by id.
const ObligationRegistry& builtin_obligations();

struct ProofRow {
  std::string id;
  std::string pattern;
  std::string formula_text;
  std::string formula_pretty;
  Verdict verdict;
  Verdict expected;
  bool matches = false;
  bool reconstructed = false;
};

struct ProofTable {
  std::vector<ProofRow> rows;

  bool all_match() const noexcept;
};

/// Solves every obligation; rows come out ordered by id.
ProofTable run_obligations(const ObligationRegistry& registry);

struct DoublingIndex {
  std::uint64_t index = 0;
  bool out_of_bounds = false;
};

/// Index reached by BaseVector::set_num_qubits(2 * n) into a 64-entry table.
constexpr DoublingIndex simulate_doubling_index(std::uint64_t n) noexcept {
  const std::uint64_t index = 2 * n;
  return {index, index >= 64};
}

}  // namespace qai
