#include <doctest.h>

#include <random>

#include "qai/verifier.hpp"

using namespace qai;

namespace {

constexpr std::uint64_t kOracleLimit = std::uint64_t{1} << 17;

std::optional<std::uint64_t> brute_force(const ConstraintFormula& f, std::uint64_t limit) {
  for (std::uint64_t n = 0; n < limit; ++n) {
    if (f.holds(n)) return n;
  }
  return std::nullopt;
}

Verdict solve_text(const char* text) { return solve(parse_formula(text)); }

}  // namespace

TEST_CASE("parse_formula builds conjuncts without simplifying") {
  const auto one = parse_formula("n >= 64");
  REQUIRE(one.conjuncts.size() == 1);
  CHECK(one.conjuncts[0] == Comparison{AffineTerm::variable(), Cmp::Ge, AffineTerm::constant(64)});

  const auto two = parse_formula("n < 64 && 2*n >= 64");
  REQUIRE(two.conjuncts.size() == 2);
  CHECK(two.conjuncts[1].lhs == AffineTerm::scaled(2));

  CHECK(parse_formula("n*3 <= 0x10").conjuncts[0].lhs == AffineTerm::scaled(3));
  CHECK(parse_formula("5 + n == 9").conjuncts[0].lhs == AffineTerm::shifted(5));
  CHECK(parse_formula(two.to_string()) == two);
  CHECK(two.to_pretty_string() == "n < 64 ∧ 2n ≥ 64");
}

TEST_CASE("parse_formula reports the column of the problem") {
  try {
    parse_formula("m >= 3");
    FAIL("expected a syntax error");
  } catch (const FormulaSyntaxError& e) {
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
  }
  try {
    parse_formula("n >= 3 && n ? 4");
    FAIL("expected a syntax error");
  } catch (const FormulaSyntaxError& e) {
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(parse_formula(""), FormulaSyntaxError);
  CHECK_THROWS_AS(parse_formula("n >= 64 &&"), FormulaSyntaxError);
  CHECK_THROWS_AS(parse_formula("n >= 99999999999999999999999"), FormulaSyntaxError);
}

TEST_CASE("solve returns minimal witnesses for the published constraints") {
  CHECK(solve_text("n >= 64") == Verdict::sat(64));
  CHECK(solve_text("n < 64 && 2*n >= 64") == Verdict::sat(32));
  CHECK(solve_text("n >= 40") == Verdict::sat(40));
  CHECK(solve_text("n >= 64 && n < 32") == Verdict::unsat());
}

TEST_CASE("the n+1 chain resolves to 63 by brute force and by the solver") {
  const auto f = parse_formula("2*n >= 64 && n < 64 && n + 1 >= 64");
  REQUIRE(brute_force(f, 128) == std::optional<std::uint64_t>{63});
  CHECK(solve(f) == Verdict::sat(63));
}

TEST_CASE("wrap-around arithmetic reaches 2^63") {
  const auto v = solve_text("2*n == 0 && n > 0");
  REQUIRE(v.is_sat());
  CHECK(*v.witness == (std::uint64_t{1} << 63));
  CHECK(parse_formula("2*n == 0 && n > 0").holds(*v.witness));
}

TEST_CASE("solve handles extremes of the domain") {
  CHECK(solve_text("n == 18446744073709551615") == Verdict::sat(UINT64_MAX));
  CHECK(solve_text("n > 18446744073709551615") == Verdict::unsat());
  CHECK(solve_text("n < 0") == Verdict::unsat());
  CHECK(solve_text("n + 1 == 0") == Verdict::sat(UINT64_MAX));
  CHECK(solve_text("3 >= 2") == Verdict::sat(0));
  CHECK(solve_text("2 >= 3") == Verdict::unsat());
  CHECK(solve_text("n < 2*n && 2*n < n + 5") == Verdict::sat(1));
}

TEST_CASE("min_affine_in_range_mod agrees with brute force at small moduli") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 4000; ++i) {
    const std::uint64_t m = 1 + rng() % 97;
    const std::uint64_t a = rng() % m, b = rng() % m;
    std::uint64_t lo = rng() % m, hi = rng() % m;
    if (lo > hi) std::swap(lo, hi);
    std::optional<std::uint64_t> expect;
    for (std::uint64_t x = 0; x < m; ++x) {
      const std::uint64_t v = (a * x + b) % m;
      if (lo <= v && v <= hi) {
        expect = x;
        break;
      }
    }
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(lo);
    CAPTURE(hi);
    CAPTURE(m);
    REQUIRE(min_affine_in_range_mod(a, b, lo, hi, m) == expect);
  }
  CHECK(min_affine_in_range(2, 0, 64, UINT64_MAX) == std::optional<std::uint64_t>{32});
  CHECK(min_affine_in_range(2, 0, 1, 1) == std::nullopt);
}

TEST_CASE("solve agrees with exhaustive evaluation on random formulas") {
  std::mt19937_64 rng(20240601);
  auto constant = [&] { return rng() % ((std::uint64_t{1} << 16) + 1); };
  auto term = [&]() -> AffineTerm {
    switch (rng() % 4) {
      case 0:
        return AffineTerm::constant(constant());
      case 1:
        return AffineTerm::variable();
      case 2:
        return AffineTerm::scaled(constant());
      default:
        return AffineTerm::shifted(constant());
    }
  };
  for (int i = 0; i < 1000; ++i) {
    ConstraintFormula f;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < count; ++k) {
      f.conjuncts.push_back({term(), static_cast<Cmp>(rng() % 5), term()});
    }
    CAPTURE(f.to_string());
    const auto oracle = brute_force(f, kOracleLimit);
    const auto got = solve(f);
    if (oracle) {
      REQUIRE(got == Verdict::sat(*oracle));
    } else if (got.is_sat()) {
      REQUIRE(*got.witness >= kOracleLimit);
      REQUIRE(f.holds(*got.witness));
    }
  }
}

TEST_CASE("solve_boolean evaluates the injection model") {
  CHECK(solve_boolean({true, false}).is_sat());
  CHECK_FALSE(solve_boolean({std::nullopt, true}).is_sat());
  const auto free = solve_boolean({});
  REQUIRE(free.assignment);
  CHECK(*free.assignment == BooleanAssignment{true, false});
  CHECK(free.witness_text() == "attacker_controls_string=true, qasm_sanitized=false");
  CHECK_FALSE(solve_boolean({false, std::nullopt}).is_sat());
}

TEST_CASE("builtin registry reproduces every expected verdict") {
  const auto& reg = builtin_obligations();
  CHECK(reg.obligations.size() == 13);
  const auto table = run_obligations(reg);
  CHECK(table.all_match());
  auto witness_of = [&](const char* id) {
    for (const auto& r : table.rows) {
      if (r.id == id) return r.verdict.witness;
    }
    return std::optional<std::uint64_t>{};
  };
  CHECK(witness_of("QAI-001") == 64u);
  CHECK(witness_of("QAI-002") == 32u);
  CHECK(witness_of("QAI-003") == 32u);
  CHECK(witness_of("QAI-004") == 63u);
  CHECK(witness_of("QAI-005") == 64u);
  CHECK(witness_of("QAI-PY-001") == 40u);
  CHECK(witness_of("QAI-PY-002") == 30u);
  CHECK(witness_of("QAI-PY-003") == 32u);
  CHECK(witness_of("QAI-PY-004") == 30u);
  for (std::size_t i = 1; i < table.rows.size(); ++i) CHECK(table.rows[i - 1].id < table.rows[i].id);

  std::size_t unsat = 0;
  for (const auto& r : table.rows) unsat += r.verdict.is_sat() ? 0 : 1;
  CHECK(unsat == 2);
}

TEST_CASE("registry witnesses are minimal") {
  for (const auto& o : builtin_obligations().obligations) {
    if (const auto* f = std::get_if<ConstraintFormula>(&o.formula)) {
      CAPTURE(o.id);
      CHECK(solve(*f).witness == brute_force(*f, kOracleLimit));
    }
  }
}

TEST_CASE("a wrong expected value is flagged") {
  ObligationRegistry reg;
  reg.obligations.push_back({"X-1", "BITS[n]", parse_formula("n >= 64"), Verdict::sat(65), "", false});
  reg.obligations.push_back({"X-2", "BITS[n]", parse_formula("n >= 64"), Verdict::sat(64), "", false});
  const auto table = run_obligations(reg);
  REQUIRE(table.rows.size() == 2);
  CHECK_FALSE(table.rows[0].matches);
  CHECK(table.rows[1].matches);
  CHECK_FALSE(table.all_match());
}

TEST_CASE("an empty registry gives an empty table") {
  const auto table = run_obligations(ObligationRegistry{});
  CHECK(table.rows.empty());
  CHECK(table.all_match());
}

TEST_CASE("doubling index crosses the table at 32 qubits") {
  static_assert(simulate_doubling_index(32).index == 64);
  CHECK(simulate_doubling_index(32).out_of_bounds);
  CHECK(simulate_doubling_index(31).index == 62);
  CHECK_FALSE(simulate_doubling_index(31).out_of_bounds);
  CHECK(simulate_doubling_index(0).index == 0);
  CHECK_FALSE(simulate_doubling_index(0).out_of_bounds);
}
