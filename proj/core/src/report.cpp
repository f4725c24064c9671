#include "qai/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <json.hpp>
#include <sstream>

namespace qai {

using nlohmann::json;

namespace {

// ---- enum text -----------------------------------------------------------

template <typename T, typename Parse>
T parse_or_throw(const json& j, Parse parse, const char* what) {
  const auto text = j.get<std::string>();
  const auto value = parse(text);
  if (!value) throw ReportParseError(std::string("unknown ") + what + " '" + text + "'");
  return *value;
}

std::optional<SatStatus> parse_status(std::string_view s) {
  if (s == "SAT") return SatStatus::Sat;
  if (s == "UNSAT") return SatStatus::Unsat;
  return std::nullopt;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

// ---- verdicts --------------------------------------------------------------

json verdict_json(const Verdict& v) {
  json j;
  j["status"] = std::string(to_string(v.status));
  if (v.witness) j["witness"] = *v.witness;
  if (v.assignment) {
    j["assignment"] = {{"attacker_controls_string", v.assignment->attacker_controls_string},
                       {"qasm_sanitized", v.assignment->qasm_sanitized}};
  }
  return j;
}

Verdict verdict_from(const json& j) {
  Verdict v;
  v.status = parse_or_throw<SatStatus>(j.at("status"), parse_status, "status");
  v.witness = optional_from<std::uint64_t>(j, "witness");
  if (j.contains("assignment")) {
    const auto& a = j.at("assignment");
    v.assignment =
        BooleanAssignment{a.at("attacker_controls_string").get<bool>(), a.at("qasm_sanitized").get<bool>()};
  }
  return v;
}

// ---- findings ----------------------------------------------------------------

json finding_json(const Finding& f) {
  return {
      {"rule_id", f.rule_id},
      {"cwe", f.cwe},
      {"severity", std::string(to_string(f.severity))},
      {"path", f.path},
      {"line", f.line},
      {"column", f.column},
      {"snippet", f.snippet},
      {"match", f.match},
      {"guard", std::string(to_string(f.guard))},
      {"mitigated", f.mitigated},
      {"suppressed_by_filter", optional_json(f.suppressed_by_filter)},
      {"verdict", f.verdict ? verdict_json(*f.verdict) : json(nullptr)},
      {"provenance", optional_json(f.provenance)},
  };
}

Finding finding_from(const json& j) {
  Finding f;
  f.rule_id = j.at("rule_id").get<std::string>();
  f.cwe = j.at("cwe").get<int>();
  f.severity = parse_or_throw<Severity>(j.at("severity"), parse_severity, "severity");
  f.path = j.at("path").get<std::string>();
  f.line = j.at("line").get<std::size_t>();
  f.column = j.at("column").get<std::size_t>();
  f.snippet = j.at("snippet").get<std::string>();
  f.match = j.at("match").get<std::string>();
  f.guard = parse_or_throw<MitigationStatus>(j.at("guard"), parse_mitigation, "guard");
  f.mitigated = j.at("mitigated").get<bool>();
  f.suppressed_by_filter = optional_from<std::string>(j, "suppressed_by_filter");
  if (!j.at("verdict").is_null()) f.verdict = verdict_from(j.at("verdict"));
  f.provenance = optional_from<std::string>(j, "provenance");
  return f;
}

json findings_json(const std::vector<Finding>& findings) {
  json arr = json::array();
  for (const auto& f : findings) arr.push_back(finding_json(f));
  return arr;
}

std::vector<Finding> findings_from(const json& arr) {
  std::vector<Finding> out;
  for (const auto& j : arr) out.push_back(finding_from(j));
  return out;
}

// ---- scores ------------------------------------------------------------------

json score_json(const FrameworkScore& s) {
  return {{"name", s.name}, {"crit", s.crit},   {"high", s.high},
          {"med", s.med},   {"score", s.score}, {"grade", std::string(to_string(s.grade))}};
}

FrameworkScore score_from(const json& j) {
  FrameworkScore s;
  s.name = j.at("name").get<std::string>();
  s.crit = j.at("crit").get<std::size_t>();
  s.high = j.at("high").get<std::size_t>();
  s.med = j.at("med").get<std::size_t>();
  s.score = j.at("score").get<int>();
  s.grade = parse_or_throw<Grade>(j.at("grade"), parse_grade, "grade");
  return s;
}

// ---- proofs ------------------------------------------------------------------

json proof_row_json(const ProofRow& r) {
  return {{"id", r.id},
          {"pattern", r.pattern},
          {"formula", r.formula_text},
          {"formula_pretty", r.formula_pretty},
          {"verdict", verdict_json(r.verdict)},
          {"expected", verdict_json(r.expected)},
          {"matches", r.matches},
          {"reconstructed", r.reconstructed}};
}

ProofRow proof_row_from(const json& j) {
  ProofRow r;
  r.id = j.at("id").get<std::string>();
  r.pattern = j.at("pattern").get<std::string>();
  r.formula_text = j.at("formula").get<std::string>();
  r.formula_pretty = j.at("formula_pretty").get<std::string>();
  r.verdict = verdict_from(j.at("verdict"));
  r.expected = verdict_from(j.at("expected"));
  r.matches = j.at("matches").get<bool>();
  r.reconstructed = j.at("reconstructed").get<bool>();
  return r;
}

json proofs_json(const ProofTable& t) {
  json arr = json::array();
  for (const auto& r : t.rows) arr.push_back(proof_row_json(r));
  return arr;
}

// ---- vendoring -----------------------------------------------------------------

json edge_json(const PropagationEdge& e) {
  json files = json::array();
  for (const auto& f : e.files) {
    files.push_back({{"source_path", f.source_path},
                     {"target_path", f.target_path},
                     {"hash", f.hash},
                     {"size_bytes", f.size_bytes}});
  }
  return {{"source_root", e.source_root},
          {"target_root", e.target_root},
          {"source_prefix", e.source_prefix},
          {"target_prefix", e.target_prefix},
          {"bidirectional", e.bidirectional},
          {"shared_files", e.shared_files},
          {"shared_bytes", e.shared_bytes},
          {"files", files},
          {"carried_findings", findings_json(e.carried_findings)}};
}

PropagationEdge edge_from(const json& j) {
  PropagationEdge e;
  e.source_root = j.at("source_root").get<std::string>();
  e.target_root = j.at("target_root").get<std::string>();
  e.source_prefix = j.at("source_prefix").get<std::string>();
  e.target_prefix = j.at("target_prefix").get<std::string>();
  e.bidirectional = j.at("bidirectional").get<bool>();
  e.shared_files = j.at("shared_files").get<std::size_t>();
  e.shared_bytes = j.at("shared_bytes").get<std::uint64_t>();
  for (const auto& f : j.at("files")) {
    e.files.push_back({f.at("source_path").get<std::string>(), f.at("target_path").get<std::string>(),
                       f.at("hash").get<std::string>(), f.at("size_bytes").get<std::uint64_t>()});
  }
  e.carried_findings = findings_from(j.at("carried_findings"));
  return e;
}

json vendor_section_json(const std::vector<PropagationEdge>& edges, const std::vector<std::string>& chains,
                         const std::vector<std::string>& warnings) {
  json arr = json::array();
  for (const auto& e : edges) arr.push_back(edge_json(e));
  return {{"edges", arr}, {"chains", chains}, {"warnings", warnings}};
}

// ---- text helpers ----------------------------------------------------------------

// Display columns of a UTF-8 string (one per code point).
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  const std::size_t w = display_width(s);
  if (w < width) out.append(width - w, ' ');
  return out;
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string security_severity(Severity s) {
  switch (s) {
    case Severity::Critical:
      return "9.8";
    case Severity::High:
      return "7.5";
    case Severity::Medium:
      return "5.0";
  }
  return "5.0";
}

std::string sarif_level(Severity s) { return s == Severity::Medium ? "warning" : "error"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string_view tool_version() noexcept { return QAI_VERSION; }

std::vector<RuleSummary> summarize(const RuleSet& rules) {
  std::vector<RuleSummary> out;
  for (const auto& r : rules) out.push_back({r.id, r.cwe, r.severity, r.description});
  return out;
}

Scorecard ScanReport::scorecard() const {
  std::vector<FrameworkScore> rows;
  for (const auto& r : roots) rows.push_back(r.score);
  return build_scorecard(std::move(rows));
}

std::string emit_json(const ScanReport& report) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = {{"name", report.tool}, {"version", report.version}};
  j["timestamp"] = report.timestamp;
  const auto& o = report.options;
  j["options"] = {{"include_test_paths", o.include_test_paths},
                  {"guard_window", o.guard_window},
                  {"follow_symlinks", o.follow_symlinks},
                  {"max_file_bytes", o.max_file_bytes},
                  {"verify", o.verify},
                  {"rules", o.rules_provenance}};

  json rules = json::array();
  for (const auto& r : report.rules) {
    rules.push_back({{"id", r.id},
                     {"cwe", r.cwe},
                     {"severity", std::string(to_string(r.severity))},
                     {"description", r.description}});
  }
  j["rules"] = rules;

  json roots = json::array();
  for (const auto& r : report.roots) {
    json skips = json::array();
    for (const auto& s : r.scan.skips) skips.push_back({{"path", s.path}, {"reason", s.reason}});
    roots.push_back({{"root", r.scan.root},
                     {"name", r.scan.name},
                     {"org", r.org},
                     {"files_scanned", r.scan.files_scanned},
                     {"skips", skips},
                     {"findings", findings_json(r.scan.findings)},
                     {"score", score_json(r.score)}});
  }
  j["roots"] = roots;

  const Scorecard card = report.scorecard();
  json rows = json::array();
  for (const auto& r : card.rows) rows.push_back(score_json(r));
  j["scorecard"] = {
      {"rows", rows},
      {"totals", {{"crit", card.total_crit}, {"high", card.total_high}, {"med", card.total_med}}}};

  j["proofs"] = report.proofs ? proofs_json(*report.proofs) : json(nullptr);
  j["vendor"] = report.vendor ? vendor_section_json(report.vendor->edges, report.vendor->chains,
                                                    report.vendor->warnings)
                              : json(nullptr);
  return dump(j);
}

ScanReport parse_report(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw ReportParseError("unsupported schema_version " + j.at("schema_version").dump());
    }
    ScanReport r;
    r.tool = j.at("tool").at("name").get<std::string>();
    r.version = j.at("tool").at("version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    const auto& o = j.at("options");
    r.options.include_test_paths = o.at("include_test_paths").get<bool>();
    r.options.guard_window = o.at("guard_window").get<std::size_t>();
    r.options.follow_symlinks = o.at("follow_symlinks").get<bool>();
    r.options.max_file_bytes = o.at("max_file_bytes").get<std::uintmax_t>();
    r.options.verify = o.at("verify").get<bool>();
    r.options.rules_provenance = o.at("rules").get<std::string>();
    for (const auto& rj : j.at("rules")) {
      r.rules.push_back({rj.at("id").get<std::string>(), rj.at("cwe").get<int>(),
                         parse_or_throw<Severity>(rj.at("severity"), parse_severity, "severity"),
                         rj.at("description").get<std::string>()});
    }
    for (const auto& rj : j.at("roots")) {
      RootReport root;
      root.scan.root = rj.at("root").get<std::string>();
      root.scan.name = rj.at("name").get<std::string>();
      root.org = rj.at("org").get<std::string>();
      root.scan.files_scanned = rj.at("files_scanned").get<std::size_t>();
      for (const auto& s : rj.at("skips")) {
        root.scan.skips.push_back({s.at("path").get<std::string>(), s.at("reason").get<std::string>()});
      }
      root.scan.findings = findings_from(rj.at("findings"));
      root.score = score_from(rj.at("score"));
      r.roots.push_back(std::move(root));
    }
    if (!j.at("proofs").is_null()) {
      ProofTable t;
      for (const auto& row : j.at("proofs")) t.rows.push_back(proof_row_from(row));
      r.proofs = std::move(t);
    }
    if (!j.at("vendor").is_null()) {
      VendorSection v;
      const auto& vj = j.at("vendor");
      for (const auto& e : vj.at("edges")) v.edges.push_back(edge_from(e));
      v.chains = vj.at("chains").get<std::vector<std::string>>();
      v.warnings = vj.at("warnings").get<std::vector<std::string>>();
      r.vendor = std::move(v);
    }
    return r;
  } catch (const json::exception& e) {
    throw ReportParseError(std::string("malformed report: ") + e.what());
  }
}

std::string emit_sarif(const ScanReport& report) {
  json rules = json::array();
  std::map<std::string, std::size_t> rule_index;
  for (const auto& r : report.rules) {
    rule_index[r.id] = rules.size();
    rules.push_back({{"id", r.id},
                     {"shortDescription", {{"text", r.description.empty() ? r.id : r.description}}},
                     {"defaultConfiguration", {{"level", sarif_level(r.severity)}}},
                     {"properties",
                      {{"tags", {"security", "CWE-" + std::to_string(r.cwe)}},
                       {"security-severity", security_severity(r.severity)},
                       {"qai-severity", std::string(to_string(r.severity))}}}});
  }

  json bases = json::object();
  json results = json::array();
  for (const auto& root : report.roots) {
    std::string uri = root.scan.root;
    if (uri.empty() || uri.back() != '/') uri += '/';
    bases[root.scan.name] = {{"uri", uri}};
    for (const auto& f : root.scan.findings) {
      json result = {
          {"ruleId", f.rule_id},
          {"level", sarif_level(f.severity)},
          {"message",
           {{"text", f.rule_id + " (CWE-" + std::to_string(f.cwe) + ", " +
                         std::string(to_string(f.severity)) + "): " + f.match}}},
          {"locations",
           json::array({{{"physicalLocation",
                          {{"artifactLocation", {{"uri", f.path}, {"uriBaseId", root.scan.name}}},
                           {"region",
                            {{"startLine", f.line},
                             {"startColumn", f.column},
                             {"snippet", {{"text", f.snippet}}}}}}}}})},
      };
      if (auto it = rule_index.find(f.rule_id); it != rule_index.end()) {
        result["ruleIndex"] = it->second;
      }
      json props = {{"guard", std::string(to_string(f.guard))}, {"mitigated", f.mitigated}};
      if (f.provenance) props["provenance"] = *f.provenance;
      if (f.verdict) props["verdict"] = verdict_json(*f.verdict);
      result["properties"] = props;

      json suppressions = json::array();
      if (f.suppressed_by_filter) {
        suppressions.push_back({{"kind", "external"}, {"justification", *f.suppressed_by_filter}});
      }
      if (f.mitigated) {
        suppressions.push_back(
            {{"kind", "inSource"}, {"justification", "hard guard rejects out-of-range input"}});
      }
      if (!suppressions.empty()) result["suppressions"] = suppressions;
      results.push_back(std::move(result));
    }
  }

  json run = {
      {"tool",
       {{"driver",
         {{"name", report.tool},
          {"version", report.version},
          {"semanticVersion", report.version},
          {"rules", rules}}}}},
      {"originalUriBaseIds", bases},
      {"results", results},
      {"invocations", json::array({{{"executionSuccessful", true}, {"startTimeUtc", report.timestamp}}})}};
  json sarif = {{"$schema", "https://json.schemastore.org/sarif-2.1.0.json"},
                {"version", "2.1.0"},
                {"runs", json::array({run})}};
  return dump(sarif);
}

std::string emit_markdown(const Scorecard& card, const ProofTable* proofs,
                          const std::map<std::string, std::string>& orgs, const VendorSection* vendor) {
  std::ostringstream out;
  out << "## Scorecard\n\n";
  out << "| Framework | Org | CRIT | HIGH | MED | Score | Grade |\n";
  out << "|---|---|---:|---:|---:|---:|---|\n";
  for (const auto& r : card.rows) {
    const auto org = orgs.find(r.name);
    out << "| " << md_cell(r.name) << " | " << md_cell(org == orgs.end() ? "-" : org->second) << " | "
        << r.crit << " | " << r.high << " | " << r.med << " | " << r.score << "/100 | " << to_string(r.grade)
        << " |\n";
  }
  if (!card.rows.empty()) {
    out << "| **Total** | | " << card.total_crit << " | " << card.total_high << " | " << card.total_med
        << " | | |\n";
  }

  if (proofs) {
    out << "\n## Proof obligations\n\n";
    out << "| ID | Pattern | Constraint | Result | Witness |\n";
    out << "|---|---|---|---|---|\n";
    for (const auto& r : proofs->rows) {
      out << "| " << md_cell(r.id) << " | " << md_cell(r.pattern) << " | " << md_cell(r.formula_pretty)
          << " | " << to_string(r.verdict.status) << " | " << md_cell(r.verdict.witness_text()) << " |\n";
    }
  }

  if (vendor && (!vendor->edges.empty() || !vendor->warnings.empty())) {
    out << "\n## Vendored code\n\n";
    for (const auto& e : vendor->edges) {
      out << "- " << e.source_root << " → " << e.target_root << ": " << e.shared_files
          << " shared files under `" << (e.target_prefix.empty() ? "." : e.target_prefix) << "`, "
          << e.carried_findings.size() << " carried findings"
          << (e.bidirectional ? " (direction undetermined)" : "") << "\n";
    }
    for (const auto& c : vendor->chains) out << "- chain: " << c << "\n";
    for (const auto& w : vendor->warnings) out << "- warning: " << w << "\n";
  }
  return out.str();
}

std::string emit_markdown(const ScanReport& report) {
  std::map<std::string, std::string> orgs;
  for (const auto& r : report.roots) orgs[r.scan.name] = r.org;
  return emit_markdown(report.scorecard(), report.proofs ? &*report.proofs : nullptr, orgs,
                       report.vendor ? &*report.vendor : nullptr);
}

std::string render_proof_text(const ProofTable& table, bool color) {
  const std::vector<std::string> header{"ID", "Pattern", "Constraint", "Result", "Witness", "Expected", ""};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : table.rows) {
    std::string expected = std::string(to_string(r.expected.status));
    if (r.expected.witness) expected += "/" + std::to_string(*r.expected.witness);
    rows.push_back({r.id + (r.reconstructed ? "*" : ""), r.pattern, r.formula_pretty,
                    std::string(to_string(r.verdict.status)), r.verdict.witness_text(), expected,
                    r.matches ? "ok" : "MISMATCH"});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = display_width(header[c]);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], display_width(row[c]));
  }

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row, bool is_header) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool last = c + 1 == row.size();
      std::string cell = last ? row[c] : pad(row[c], width[c]);
      if (color && !is_header && last) {
        cell = (row[c] == "ok" ? "\x1b[32m" : "\x1b[31m") + cell + "\x1b[0m";
      }
      line += cell;
      if (!last) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  emit(header, true);
  for (const auto& row : rows) emit(row, false);

  std::size_t matched = 0;
  for (const auto& r : table.rows) matched += r.matches ? 1 : 0;
  std::size_t sat = 0;
  for (const auto& r : table.rows) sat += r.verdict.is_sat() ? 1 : 0;
  out << '\n'
      << matched << "/" << table.rows.size() << " obligations match their expected verdict (" << sat
      << " SAT, " << table.rows.size() - sat << " UNSAT)\n";
  if (std::any_of(table.rows.begin(), table.rows.end(), [](const ProofRow& r) { return r.reconstructed; })) {
    out << "* registry-only row reconstructed to complete the 13-row table\n";
  }
  return out.str();
}

std::string proof_table_json(const ProofTable& table) {
  return dump({{"schema_version", kReportSchemaVersion},
               {"all_match", table.all_match()},
               {"obligations", proofs_json(table)}});
}

std::string render_vendor_text(const ChainReport& report) {
  std::ostringstream out;
  if (report.edges.empty()) out << "no vendored trees detected\n";
  for (const auto& e : report.edges) {
    out << "edge: " << e.source_root << " → " << e.target_root
        << (e.bidirectional ? " (bidirectional: equal nesting depth)" : "") << '\n';
    out << "  shared files: " << e.shared_files << " (" << e.shared_bytes << " bytes)\n";
    out << "  source prefix: " << (e.source_prefix.empty() ? "." : e.source_prefix) << '\n';
    out << "  target prefix: " << (e.target_prefix.empty() ? "." : e.target_prefix) << '\n';
    out << "  carried findings: " << e.carried_findings.size() << '\n';
    for (const auto& f : e.carried_findings) {
      out << "    " << f.rule_id << " " << to_string(f.severity) << " " << f.path << ":" << f.line
          << (f.mitigated ? " (mitigated)" : "") << '\n';
    }
  }
  for (const auto& line : report.rendered()) out << "chain: " << line << '\n';
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string vendor_json(const ChainReport& report, std::string_view timestamp) {
  json j = vendor_section_json(report.edges, report.rendered(), report.warnings);
  j["schema_version"] = kReportSchemaVersion;
  j["timestamp"] = std::string(timestamp);
  j["tool"] = {{"name", "qai"}, {"version", std::string(tool_version())}};
  return dump(j);
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qai
