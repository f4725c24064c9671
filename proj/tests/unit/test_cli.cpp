#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "temp_tree.hpp"

namespace {

const std::string kCorpus = std::string(QAI_FIXTURE_DIR) + "/corpus/";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qai");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qai::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"scan", kCorpus + "aer-mini", "--fail-under", "60", "--timestamp", "T"}).code == 1);
  CHECK(run({"scan", kCorpus + "aer-mini", "--fail-under", "0", "--timestamp", "T"}).code == 0);
  CHECK(run({"prove"}).code == 0);

  const auto missing = run({"scan", "nonexistent/"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("not a directory") != std::string::npos);

  const auto bad = run({"scan"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"scan", kCorpus + "poc2", "--fail-under", "101"}).code == 2);
  CHECK(run({"vendor", kCorpus + "aer-mini", kCorpus + "xacc-mini", "--vendor-direction", "nope"}).code == 2);
}

TEST_CASE("reports go to stdout or --out, diagnostics to stderr") {
  const auto r = run({"scan", kCorpus + "poc2", "--timestamp", "T"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["timestamp"] == "T");

  TempTree t("cli");
  const std::string path = (t.root / "r.sarif").string();
  const auto to_file =
      run({"scan", kCorpus + "poc2", "--format", "sarif", "--out", path, "--timestamp", "T"});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["version"] == "2.1.0");

  const auto below = run({"scan", kCorpus + "poc2", "--fail-under", "90", "--timestamp", "T"});
  CHECK(below.code == 1);
  CHECK(below.err.find("below --fail-under 90") != std::string::npos);
}

TEST_CASE("rule files change scoring") {
  TempTree t("cli-rules");
  t.write("lower.rules",
          "[rule]\nid = QAI-DS-001\ncwe = 502\nseverity = MEDIUM\nscope = python\n"
          "pattern = \\bpickle\\.load\\s*\\(\n");
  const auto r =
      run({"scan", kCorpus + "poc2", "--rules", (t.root / "lower.rules").string(), "--timestamp", "T"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["roots"][0]["score"]["score"] == 97);

  t.write("bad.rules", "[rule]\nid = X\n");
  const auto bad = run({"scan", kCorpus + "poc2", "--rules", (t.root / "bad.rules").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("rule file") != std::string::npos);
}

TEST_CASE("timestamp comes from the environment when not given") {
  ::setenv("QAI_TIMESTAMP", "ENV-T", 1);
  const auto r = run({"scan", kCorpus + "poc2"});
  ::unsetenv("QAI_TIMESTAMP");
  CHECK(nlohmann::json::parse(r.out)["timestamp"] == "ENV-T");
}

TEST_CASE("prove formats") {
  const auto text = run({"prove"});
  CHECK(text.out.find("QAI-PY-001") != std::string::npos);
  CHECK(text.out.find("\x1b[") == std::string::npos);
  const auto j = nlohmann::json::parse(run({"prove", "--format", "json"}).out);
  CHECK(j["obligations"].size() == 13);
}

TEST_CASE("vendor subcommand") {
  const auto r = run({"vendor", kCorpus + "aer-mini", kCorpus + "xacc-mini"});
  CHECK(r.code == 0);
  CHECK(r.out.find("aer-mini → xacc-mini") != std::string::npos);
  const auto j = nlohmann::json::parse(
      run({"vendor", kCorpus + "aer-mini", kCorpus + "xacc-mini", "--format", "json", "--timestamp", "T"})
          .out);
  CHECK(j["edges"].size() == 1);
  const auto none = run({"vendor", kCorpus + "aer-mini", kCorpus + "poc2"});
  CHECK(none.code == 0);
}

TEST_CASE("scan with vendoring folds carried findings into the target") {
  const auto r =
      run({"scan", kCorpus + "aer-mini", kCorpus + "xacc-mini", "--vendoring", "--timestamp", "T"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["vendor"]["chains"][0] == "aer-mini → xacc-mini");
}

TEST_CASE("rules subcommand prints a loadable rule file") {
  const auto r = run({"rules"});
  CHECK(r.code == 0);
  CHECK(r.out.find("id = QAI-PY-001") != std::string::npos);
  TempTree t("cli-dump");
  t.write("all.rules", r.out);
  const auto again = run({"rules", "--rules", (t.root / "all.rules").string()});
  CHECK(again.code == 0);
  CHECK(again.out == r.out);
}
