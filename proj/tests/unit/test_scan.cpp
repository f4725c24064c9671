#include <doctest.h>

#include <algorithm>

#include "qai/scan.hpp"
#include "qai/source_text.hpp"
#include "temp_tree.hpp"

using namespace qai;
namespace fs = std::filesystem;

namespace {

const RuleSet& rules() {
  static const RuleSet r = load_builtin_rules();
  return r;
}

std::vector<Finding> analyze(std::string_view path, std::string_view text, ScanOptions opts = {}) {
  return analyze_file(path, text, rules(), opts);
}

}  // namespace

TEST_CASE("classify_file by extension and shebang") {
  CHECK(classify_file("qubitvector.hpp", "") == LanguageKind::Cpp);
  CHECK(classify_file("kernel.cu", "") == LanguageKind::Cpp);
  CHECK(classify_file("state.py", "") == LanguageKind::Python);
  CHECK(classify_file("bell.qasm", "") == LanguageKind::Qasm);
  CHECK(classify_file("run", "#!/usr/bin/env python3\nprint(1)\n") == LanguageKind::Python);
  CHECK(classify_file("model.bin", std::string_view("\x7f\0\x01", 3)) == LanguageKind::Other);
  CHECK(classify_file("README.md", "text") == LanguageKind::Other);
}

TEST_CASE("scan_file reports the published sinks") {
  auto one = scan_file("qubitvector.hpp", "void f() {\n  data_size_ = BITS[num_qubits];\n}\n", rules(), {});
  REQUIRE(one.size() == 1);
  CHECK(one[0].rule_id == "QAI-001");
  CHECK(one[0].severity == Severity::Critical);
  CHECK(one[0].line == 2);
  CHECK(one[0].column == 16);
  CHECK(one[0].snippet == "data_size_ = BITS[num_qubits];");

  auto ket = scan_file("state.py", "ket = paddle.zeros([2**num_qubits, 1])\n", rules(), {});
  REQUIRE(ket.size() == 1);
  CHECK(ket[0].rule_id == "QAI-PY-004");
  CHECK(ket[0].severity == Severity::High);

  auto qasm = scan_file("qasm.py", "circuit = QuantumCircuit.from_qasm_str(\"OPENQASM 2.0;\" + user_input)\n",
                        rules(), {});
  REQUIRE(qasm.size() == 1);
  CHECK(qasm[0].rule_id == "QAI-QA-001");
  CHECK(qasm[0].severity == Severity::Critical);
}

TEST_CASE("comments and string contents never match") {
  CHECK(scan_file("x.py", "# pickle.load(f)  -- comment\n", rules(), {}).empty());
  CHECK(scan_file("x.py", "msg = \"do not call pickle.load( here\"\n", rules(), {}).empty());
  CHECK(scan_file("x.py", "'''\npickle.load(f)\n'''\n", rules(), {}).empty());
  CHECK(scan_file("x.cpp", "// data = BITS[num_qubits];\n", rules(), {}).empty());
  CHECK(scan_file("x.cpp", "/* data = BITS[num_qubits];\n   1ULL << n */\n", rules(), {}).empty());
  CHECK(scan_file("x.cpp", "auto s = \"1ULL << n\";\n", rules(), {}).empty());
}

TEST_CASE("context predicates refine matches") {
  CHECK(scan_file("a.py", "c = QuantumCircuit.from_qasm_str(\"OPENQASM 2.0;\")\n", rules(), {}).empty());
  CHECK(scan_file("a.py", "m = torch.load(p, weights_only=True)\n", rules(), {}).empty());
  CHECK(scan_file("a.py", "m = torch.load(p)\n", rules(), {}).size() == 1);
  CHECK(scan_file("a.py", "c = yaml.load(s, Loader=yaml.SafeLoader)\n", rules(), {}).empty());
  CHECK(scan_file("a.py", "c = yaml.load(s, Loader=yaml.FullLoader)\n", rules(), {}).size() == 1);
  CHECK(scan_file("a.py", "def eval(self, x):\n    return x\n", rules(), {}).empty());
}

TEST_CASE("rules only apply to their language") {
  CHECK(scan_file("a.cpp", "x = pickle.load(f);\n", rules(), {}).empty());
  CHECK(scan_file("a.py", "data_size_ = BITS[num_qubits]\n", rules(), {}).empty());
}

TEST_CASE("two rules on one line both survive") {
  auto f = scan_file("m.hpp", "auto m = set_num_qubits(2 * n) + (1ULL << (n * 2));\n", rules(), {});
  REQUIRE(f.size() == 2);
  CHECK(f[0].rule_id == "QAI-002");
  CHECK(f[1].rule_id == "QAI-003");
}

TEST_CASE("a throwing guard mitigates the sink") {
  const char* src =
      "void QubitVector::set(uint_t n) {\n"
      "  if (n > 63) throw std::invalid_argument(\"n > 63 not supported\");\n"
      "  data_size_ = BITS[n];\n"
      "}\n";
  auto f = analyze("qv.hpp", src);
  REQUIRE(f.size() == 1);
  CHECK(f[0].guard == MitigationStatus::HardGuard);
  CHECK(f[0].mitigated);
  CHECK_FALSE(f[0].scored());
}

TEST_CASE("a warning guard does not mitigate") {
  const char* src =
      "def shadow(n_wires):\n"
      "    if n_wires > 16:\n"
      "        warnings.warn(\"large\")\n"
      "    return np.zeros((2 ** n_wires, 2 ** n_wires))\n";
  auto f = analyze("shadow.py", src);
  REQUIRE(f.size() == 1);
  CHECK(f[0].guard == MitigationStatus::WarningOnly);
  CHECK_FALSE(f[0].mitigated);
  CHECK(f[0].scored());
}

TEST_CASE("guards must bind the sink identifier and sit in scope") {
  auto unguarded = analyze("a.py", "def f(n):\n    return np.zeros(2**n)\n");
  REQUIRE(unguarded.size() == 1);
  CHECK(unguarded[0].guard == MitigationStatus::Unguarded);

  auto other_var = analyze("a.py",
                           "def f(n, m):\n    if m > 3:\n        raise ValueError()\n"
                           "    return np.zeros(2**n)\n");
  CHECK(other_var[0].guard == MitigationStatus::Unguarded);

  auto other_function = analyze("a.py",
                                "def g(n):\n    if n > 30:\n        raise ValueError()\n\n"
                                "def f(n):\n    return np.zeros(2**n)\n");
  CHECK(other_function[0].guard == MitigationStatus::Unguarded);

  auto closed_block = analyze("a.cpp",
                              "void g(int n) {\n  if (n > 63) { throw 1; }\n}\n"
                              "void f(int n) {\n  auto d = 1ULL << n;\n}\n");
  CHECK(closed_block[0].guard == MitigationStatus::Unguarded);

  auto too_far = analyze("a.py", "def f(n):\n    if n > 30:\n        raise ValueError()\n" +
                                     std::string(20, '\n') + "    return np.zeros(2**n)\n");
  CHECK(too_far[0].guard == MitigationStatus::Unguarded);
  ScanOptions wide;
  wide.guard_window = 40;
  auto widened = analyze("a.py",
                         "def f(n):\n    if n > 30:\n        raise ValueError()\n" + std::string(20, '\n') +
                             "    return np.zeros(2**n)\n",
                         wide);
  CHECK(widened[0].guard == MitigationStatus::HardGuard);
}

TEST_CASE("production filters") {
  auto in_tests = analyze("tests/test_sim.py", "x = pickle.load(f)\n");
  REQUIRE(in_tests.size() == 1);
  CHECK(in_tests[0].suppressed_by_filter == std::optional<std::string>{"test-path"});

  ScanOptions keep;
  keep.include_test_paths = true;
  auto kept = analyze("tests/test_sim.py", "x = pickle.load(f)\n", keep);
  CHECK_FALSE(kept[0].suppressed_by_filter);

  CHECK_FALSE(analyze("contest/x.py", "x = pickle.load(f)\n")[0].suppressed_by_filter);
  CHECK_FALSE(analyze("test_x.py", "x = pickle.load(f)\n")[0].suppressed_by_filter);

  auto def = analyze("qc.py", "    def from_qasm_str(qasm_str):\n        pass\n");
  REQUIRE(def.size() == 2);
  for (const auto& f : def) {
    if (f.rule_id == "QAI-QA-003") {
      CHECK_FALSE(f.suppressed_by_filter);
      CHECK(f.severity == Severity::High);
    } else {
      CHECK(f.rule_id == "QAI-QA-001");
      CHECK(f.suppressed_by_filter == std::optional<std::string>{"definition-line"});
    }
  }
}

TEST_CASE("oversized files become skips") {
  ScanOptions tiny;
  tiny.max_file_bytes = 4;
  std::optional<SkipNotice> skip;
  auto f = analyze_file("a.py", "x = pickle.load(f)\n", rules(), tiny, &skip);
  CHECK(f.empty());
  REQUIRE(skip);
  CHECK(skip->path == "a.py");
}

TEST_CASE("scan_tree on an empty directory") {
  TempTree t("empty");
  const auto r = scan_tree(t.root, rules(), {});
  CHECK(r.files_scanned == 0);
  CHECK(r.findings.empty());
  CHECK_THROWS_AS(scan_tree(t.root / "missing", rules(), {}), ScanError);
}

TEST_CASE("scan_tree is deterministic and worker-independent") {
  const fs::path aer = fs::path(QAI_FIXTURE_DIR) / "corpus" / "aer-mini";
  const auto once = scan_tree(aer, rules(), {});
  const auto twice = scan_tree(aer, rules(), {});
  CHECK(once == twice);
  ScanOptions many;
  many.workers = 8;
  CHECK(scan_tree(aer, rules(), many) == once);
  CHECK(std::is_sorted(once.findings.begin(), once.findings.end(), canonical_less));
  CHECK(once.name == "aer-mini");
}

TEST_CASE("adding a file never removes findings") {
  TempTree t("mono");
  t.write("a.py", "x = pickle.load(f)\n");
  const auto before = scan_tree(t.root, rules(), {});
  t.write("b/c.py", "import os\n");
  t.write("b/d.cpp", "auto d = 1ULL << num_qubits;\n");
  const auto after = scan_tree(t.root, rules(), {});
  for (const auto& f : before.findings) {
    CHECK(std::find(after.findings.begin(), after.findings.end(), f) != after.findings.end());
  }
  CHECK(after.findings.size() == 2);
}

TEST_CASE("hidden directories and symlinks are skipped") {
  TempTree t("walk");
  t.write(".git/x.py", "x = pickle.load(f)\n");
  t.write("src/y.py", "y = pickle.load(f)\n");
  fs::create_symlink(t.root / "src" / "y.py", t.root / "link.py");
  const auto r = scan_tree(t.root, rules(), {});
  REQUIRE(r.findings.size() == 1);
  CHECK(r.findings[0].path == "src/y.py");
  REQUIRE(r.skips.size() == 1);
  CHECK(r.skips[0].path == "link.py");

  ScanOptions follow;
  follow.follow_symlinks = true;
  CHECK(scan_tree(t.root, rules(), follow).findings.size() == 2);
}

TEST_CASE("source text helpers") {
  CHECK(split_lines("a\r\nb\rc\n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(indentation("\t  x") == 10);
  const auto masked = code_lines(LanguageKind::Python, "s = 'ab' # c\n");
  REQUIRE(masked.size() == 1);
  CHECK(masked[0] == "s = '  '    ");
}
