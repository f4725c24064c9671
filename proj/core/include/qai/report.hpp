#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qai/rule.hpp"
#include "qai/scan.hpp"
#include "qai/scorecard.hpp"
#include "qai/vendor_graph.hpp"
#include "qai/verifier.hpp"

namespace qai {

inline constexpr int kReportSchemaVersion = 1;

std::string_view tool_version() noexcept;

/// Rule metadata carried in reports (SARIF tool.driver.rules).
struct RuleSummary {
  std::string id;
  int cwe = 0;
  Severity severity = Severity::High;
  std::string description;

  friend bool operator==(const RuleSummary&, const RuleSummary&) = default;
};

std::vector<RuleSummary> summarize(const RuleSet& rules);

struct ReportOptions {
  bool include_test_paths = false;
  std::size_t guard_window = 12;
  bool follow_symlinks = false;
  std::uintmax_t max_file_bytes = 4u * 1024u * 1024u;
  bool verify = true;
  std::string rules_provenance = "builtin";

  friend bool operator==(const ReportOptions&, const ReportOptions&) = default;
};

struct RootReport {
  ScanResult scan;
  std::string org = "-";
  FrameworkScore score;
};

struct VendorSection {
  std::vector<PropagationEdge> edges;
  std::vector<std::string> chains;
  std::vector<std::string> warnings;
};

struct ScanReport {
  std::string tool = "qai";
  std::string version{tool_version()};
  std::string timestamp;
  ReportOptions options;
  std::vector<RuleSummary> rules;
  std::vector<RootReport> roots;
  std::optional<ProofTable> proofs;
  std::optional<VendorSection> vendor;

  /// Rows for every root, in scorecard order.
  Scorecard scorecard() const;
};

class ReportParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sorted keys, two-space indent, trailing newline.
std::string emit_json(const ScanReport& report);

/// Inverse of emit_json: emit_json(parse_report(emit_json(r))) == emit_json(r).
ScanReport parse_report(std::string_view json);

/// SARIF 2.1.0, one run. Every finding appears once; mitigated and
/// filter-suppressed findings carry a suppression entry.
std::string emit_sarif(const ScanReport& report);

/// Pipe table with Framework | Org | CRIT | HIGH | MED | Score | Grade, plus a
/// totals row when non-empty, and an optional proof table.
std::string emit_markdown(const Scorecard& card, const ProofTable* proofs = nullptr,
                          const std::map<std::string, std::string>& orgs = {},
                          const VendorSection* vendor = nullptr);

/// Markdown for a whole report.
std::string emit_markdown(const ScanReport& report);

/// Aligned plain-text proof table; ANSI colour on the status column when asked.
std::string render_proof_text(const ProofTable& table, bool color);

std::string proof_table_json(const ProofTable& table);

std::string render_vendor_text(const ChainReport& report);
std::string vendor_json(const ChainReport& report, std::string_view timestamp);

/// ISO-8601 UTC, second precision.
std::string utc_timestamp_now();

}  // namespace qai
