#include "qai/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace qai {

namespace {

using u64 = std::uint64_t;
__extension__ using u128 = unsigned __int128;
__extension__ using i128 = __int128;

constexpr u64 kMax = std::numeric_limits<u64>::max();
constexpr u128 kModulus = u128{1} << 64;

// ----- rendering -----------------------------------------------------------

std::string term_text(const AffineTerm& t, bool pretty) {
  if (t.coeff == 0) return std::to_string(t.offset);
  std::string out;
  if (t.coeff == 1) {
    out = "n";
  } else {
    out = std::to_string(t.coeff) + (pretty ? "n" : "*n");
  }
  if (t.offset != 0) out += " + " + std::to_string(t.offset);
  return out;
}

std::string_view pretty_cmp(Cmp cmp) noexcept {
  switch (cmp) {
    case Cmp::Lt:
      return "<";
    case Cmp::Le:
      return "≤";
    case Cmp::Ge:
      return "≥";
    case Cmp::Gt:
      return ">";
    case Cmp::Eq:
      return "=";
  }
  return "?";
}

// ----- parsing -------------------------------------------------------------

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  ConstraintFormula parse() {
    ConstraintFormula f;
    skip_ws();
    if (at_end()) fail("empty formula");
    f.conjuncts.push_back(parse_comparison());
    skip_ws();
    while (!at_end()) {
      if (!consume("&&")) fail("expected '&&'");
      f.conjuncts.push_back(parse_comparison());
      skip_ws();
    }
    return f;
  }

 private:
  Comparison parse_comparison() {
    Comparison c;
    c.lhs = parse_term();
    skip_ws();
    if (consume("<=")) {
      c.op = Cmp::Le;
    } else if (consume(">=")) {
      c.op = Cmp::Ge;
    } else if (consume("==")) {
      c.op = Cmp::Eq;
    } else if (consume("<")) {
      c.op = Cmp::Lt;
    } else if (consume(">")) {
      c.op = Cmp::Gt;
    } else {
      fail("expected comparison operator");
    }
    c.rhs = parse_term();
    return c;
  }

  // NUM | n | NUM*n | n*NUM | n+NUM | NUM+n
  AffineTerm parse_term() {
    skip_ws();
    if (peek_variable()) {
      take_variable();
      skip_ws();
      if (consume("*")) return AffineTerm::scaled(parse_number());
      if (consume("+")) return AffineTerm::shifted(parse_number());
      return AffineTerm::variable();
    }
    const u64 value = parse_number();
    skip_ws();
    if (consume("*")) {
      skip_ws();
      take_variable();
      return AffineTerm::scaled(value);
    }
    if (consume("+")) {
      skip_ws();
      take_variable();
      return AffineTerm::shifted(value);
    }
    return AffineTerm::constant(value);
  }

  bool peek_variable() const {
    return !at_end() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
  }

  void take_variable() {
    if (!peek_variable()) fail("expected variable 'n'");
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name != "n") fail_at(start, "unknown variable '" + std::string(name) + "'");
  }

  u64 parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (peek_variable()) {
        // A second variable occurrence inside one term, or a foreign symbol.
        const std::size_t s = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          ++pos_;
        }
        const std::string_view name = text_.substr(s, pos_ - s);
        if (name != "n") fail_at(s, "unknown variable '" + std::string(name) + "'");
        fail_at(s, "terms may reference n at most once");
      }
      fail("expected number");
    }
    int base = 10;
    if (text_.substr(pos_, 2) == "0x" || text_.substr(pos_, 2) == "0X") {
      base = 16;
      pos_ += 2;
    }
    u128 value = 0;
    std::size_t digits = 0;
    while (!at_end()) {
      const char ch = text_[pos_];
      int d;
      if (ch >= '0' && ch <= '9') {
        d = ch - '0';
      } else if (base == 16 && std::isxdigit(static_cast<unsigned char>(ch))) {
        d = 10 + (std::tolower(static_cast<unsigned char>(ch)) - 'a');
      } else {
        break;
      }
      if (d >= base) break;
      value = value * static_cast<u128>(base) + static_cast<u128>(d);
      if (value > kMax) fail_at(start, "constant exceeds 64 bits");
      ++pos_;
      ++digits;
    }
    if (digits == 0) fail_at(start, "expected digits");
    return static_cast<u64>(value);
  }

  bool consume(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw FormulaSyntaxError(at + 1, msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ----- solving -------------------------------------------------------------

// Least x >= 0 with l <= (a*x mod m) <= r, given 0 <= l <= r < m <= 2^64.
std::optional<u128> first_hit(u128 a, u128 m, u128 l, u128 r) {
  a %= m;
  if (l == 0) return u128{0};
  if (a == 0) return std::nullopt;
  const u128 x = (l + a - 1) / a;
  if (a * x <= r) return x;
  // No multiple of a inside [l, r]: look for the least y with
  // (m*y mod a) in [a - r%a, a - l%a]; the interval cannot wrap here.
  const auto y = first_hit(m % a, a, (a - r % a) % a, (a - l % a) % a);
  if (!y) return std::nullopt;
  return (l + m * *y + a - 1) / a;
}

std::optional<u128> affine_hit(u128 a, u128 b, u128 lo, u128 hi, u128 m) {
  a %= m;
  b %= m;
  const u128 l = (lo + m - b) % m;
  const u128 h = (hi + m - b) % m;
  if (l <= h) return first_hit(a, m, l, h);
  auto low_part = first_hit(a, m, 0, h);
  auto high_part = first_hit(a, m, l, m - 1);
  if (!low_part) return high_part;
  if (!high_part) return low_part;
  return std::min(*low_part, *high_part);
}

Cmp flip(Cmp op) noexcept {
  switch (op) {
    case Cmp::Lt:
      return Cmp::Gt;
    case Cmp::Le:
      return Cmp::Ge;
    case Cmp::Ge:
      return Cmp::Le;
    case Cmp::Gt:
      return Cmp::Lt;
    case Cmp::Eq:
      return Cmp::Eq;
  }
  return op;
}

// Least n >= from with (term(n) op k), term non-constant.
std::optional<u64> next_one_sided(const AffineTerm& term, Cmp op, u64 k, u64 from) {
  u64 lo = 0;
  u64 hi = kMax;
  switch (op) {
    case Cmp::Lt:
      if (k == 0) return std::nullopt;
      hi = k - 1;
      break;
    case Cmp::Le:
      hi = k;
      break;
    case Cmp::Ge:
      lo = k;
      break;
    case Cmp::Gt:
      if (k == kMax) return std::nullopt;
      lo = k + 1;
      break;
    case Cmp::Eq:
      lo = hi = k;
      break;
  }
  const u128 start_value = static_cast<u128>(term.eval(from));
  const auto x = affine_hit(term.coeff, start_value, lo, hi, kModulus);
  if (!x || *x > static_cast<u128>(kMax - from)) return std::nullopt;
  return from + static_cast<u64>(*x);
}

// Last n' >= n for which coeff*n' + offset stays in the same multiple-of-2^64 band.
u64 band_end(const AffineTerm& t, u64 n) {
  if (t.coeff == 0) return kMax;
  const u128 value = static_cast<u128>(t.coeff) * n + t.offset;
  const u128 band = value >> 64;
  if (band + 1 == kModulus) return kMax;
  const u128 boundary = (band + 1) << 64;
  const u128 next = (boundary - t.offset + t.coeff - 1) / t.coeff;
  if (next - 1 > kMax) return kMax;
  return static_cast<u64>(next - 1);
}

// Least delta in [0, len] with d0 + s*delta (op) 0.
std::optional<u128> linear_hit(i128 d0, i128 s, Cmp op, u128 len) {
  auto ceil_div = [](i128 num, i128 den) -> i128 {  // num >= 0, den > 0
    return (num + den - 1) / den;
  };
  std::optional<i128> delta;
  switch (op) {
    case Cmp::Ge:
      if (d0 >= 0) {
        delta = 0;
      } else if (s > 0) {
        delta = ceil_div(-d0, s);
      }
      break;
    case Cmp::Gt:
      if (d0 > 0) {
        delta = 0;
      } else if (s > 0) {
        delta = -d0 / s + 1;
      }
      break;
    case Cmp::Le:
      if (d0 <= 0) {
        delta = 0;
      } else if (s < 0) {
        delta = ceil_div(d0, -s);
      }
      break;
    case Cmp::Lt:
      if (d0 < 0) {
        delta = 0;
      } else if (s < 0) {
        delta = d0 / -s + 1;
      }
      break;
    case Cmp::Eq:
      if (d0 == 0) {
        delta = 0;
      } else if (s != 0 && (-d0) % s == 0 && (-d0) / s > 0) {
        delta = -d0 / s;
      }
      break;
  }
  if (!delta || static_cast<u128>(*delta) > len) return std::nullopt;
  return static_cast<u128>(*delta);
}

// Both sides depend on n: walk the pieces on which neither side wraps.
std::optional<u64> next_two_sided(const Comparison& c, u64 from) {
  u64 n = from;
  const i128 slope = static_cast<i128>(c.lhs.coeff) - static_cast<i128>(c.rhs.coeff);
  for (;;) {
    const u64 end = std::min(band_end(c.lhs, n), band_end(c.rhs, n));
    const i128 d0 = static_cast<i128>(c.lhs.eval(n)) - static_cast<i128>(c.rhs.eval(n));
    if (auto delta = linear_hit(d0, slope, c.op, static_cast<u128>(end - n))) {
      return n + static_cast<u64>(*delta);
    }
    if (end == kMax) return std::nullopt;
    n = end + 1;
  }
}

std::optional<u64> next_satisfying(const Comparison& c, u64 from) {
  const bool lconst = c.lhs.is_constant();
  const bool rconst = c.rhs.is_constant();
  if (lconst && rconst) {
    if (c.holds(from)) return from;
    return std::nullopt;
  }
  if (rconst) return next_one_sided(c.lhs, c.op, c.rhs.offset, from);
  if (lconst) return next_one_sided(c.rhs, flip(c.op), c.lhs.offset, from);
  return next_two_sided(c, from);
}

}  // namespace

std::string_view to_string(Cmp cmp) noexcept {
  switch (cmp) {
    case Cmp::Lt:
      return "<";
    case Cmp::Le:
      return "<=";
    case Cmp::Ge:
      return ">=";
    case Cmp::Gt:
      return ">";
    case Cmp::Eq:
      return "==";
  }
  return "?";
}

std::string_view to_string(SatStatus s) noexcept { return s == SatStatus::Sat ? "SAT" : "UNSAT"; }

std::string ConstraintFormula::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    if (i) out += " && ";
    const auto& c = conjuncts[i];
    out += term_text(c.lhs, false);
    out += ' ';
    out += qai::to_string(c.op);
    out += ' ';
    out += term_text(c.rhs, false);
  }
  return out;
}

std::string ConstraintFormula::to_pretty_string() const {
  std::string out;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    if (i) out += " ∧ ";
    const auto& c = conjuncts[i];
    out += term_text(c.lhs, true);
    out += ' ';
    out += pretty_cmp(c.op);
    out += ' ';
    out += term_text(c.rhs, true);
  }
  return out;
}

FormulaSyntaxError::FormulaSyntaxError(std::size_t column, const std::string& message)
    : std::runtime_error("column " + std::to_string(column) + ": " + message), column_(column) {}

ConstraintFormula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

std::string BooleanFormula::to_string() const {
  std::string out = "attacker_controls_string && !qasm_sanitized";
  std::vector<std::string> pins;
  if (attacker_controls_string) {
    pins.push_back(std::string("attacker_controls_string=") + (*attacker_controls_string ? "true" : "false"));
  }
  if (qasm_sanitized) {
    pins.push_back(std::string("qasm_sanitized=") + (*qasm_sanitized ? "true" : "false"));
  }
  if (!pins.empty()) {
    out += " [";
    for (std::size_t i = 0; i < pins.size(); ++i) {
      if (i) out += ", ";
      out += pins[i];
    }
    out += "]";
  }
  return out;
}

std::string BooleanFormula::to_pretty_string() const {
  std::string out = "attacker_controls_string ∧ ¬qasm_sanitized";
  const std::string ascii = to_string();
  const auto bracket = ascii.find(" [");
  if (bracket != std::string::npos) out += ascii.substr(bracket);
  return out;
}

std::string Verdict::witness_text() const {
  if (witness) return std::to_string(*witness);
  if (assignment) {
    return std::string("attacker_controls_string=") +
           (assignment->attacker_controls_string ? "true" : "false") +
           ", qasm_sanitized=" + (assignment->qasm_sanitized ? "true" : "false");
  }
  return "-";
}

std::optional<u64> min_affine_in_range(u64 a, u64 b, u64 lo, u64 hi) {
  if (lo > hi) return std::nullopt;
  auto x = affine_hit(a, b, lo, hi, kModulus);
  if (!x || *x > kMax) return std::nullopt;
  return static_cast<u64>(*x);
}

std::optional<u64> min_affine_in_range_mod(u64 a, u64 b, u64 lo, u64 hi, u64 m) {
  if (m == 0 || lo > hi || hi >= m) return std::nullopt;
  auto x = affine_hit(a, b, lo, hi, m);
  if (!x) return std::nullopt;
  return static_cast<u64>(*x);
}

Verdict solve(const ConstraintFormula& formula) {
  // Leapfrog: every conjunct pushes n to its own next satisfying value until
  // all agree. n only grows, so every skipped value violates some conjunct
  // and the fixed point is the minimum.
  u64 n = 0;
  for (;;) {
    bool stable = true;
    for (const auto& c : formula.conjuncts) {
      const auto next = next_satisfying(c, n);
      if (!next) return Verdict::unsat();
      if (*next != n) {
        n = *next;
        stable = false;
      }
    }
    if (stable) return Verdict::sat(n);
  }
}

Verdict solve_boolean(const BooleanFormula& formula) {
  for (bool attacker : {true, false}) {
    if (formula.attacker_controls_string && *formula.attacker_controls_string != attacker) continue;
    for (bool sanitized : {false, true}) {
      if (formula.qasm_sanitized && *formula.qasm_sanitized != sanitized) continue;
      if (attacker && !sanitized) return Verdict::sat(BooleanAssignment{attacker, sanitized});
    }
  }
  return Verdict::unsat();
}

const Obligation* ObligationRegistry::find(std::string_view id) const noexcept {
  for (const auto& o : obligations) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool ProofTable::all_match() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const ProofRow& r) { return r.matches; });
}

ProofTable run_obligations(const ObligationRegistry& registry) {
  ProofTable table;
  for (const auto& ob : registry.obligations) {
    ProofRow row;
    row.id = ob.id;
    row.pattern = ob.pattern;
    row.expected = ob.expected;
    row.reconstructed = ob.reconstructed;
    if (const auto* f = std::get_if<ConstraintFormula>(&ob.formula)) {
      row.formula_text = f->to_string();
      row.formula_pretty = f->to_pretty_string();
      row.verdict = solve(*f);
    } else {
      const auto& b = std::get<BooleanFormula>(ob.formula);
      row.formula_text = b.to_string();
      row.formula_pretty = b.to_pretty_string();
      row.verdict = solve_boolean(b);
    }
    row.matches = row.verdict == row.expected;
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ProofRow& a, const ProofRow& b) { return a.id < b.id; });
  return table;
}

}  // namespace qai
