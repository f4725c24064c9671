#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qai/rule.hpp"
#include "qai/verifier.hpp"

namespace qai {

enum class LanguageKind { Cpp, Python, Qasm, Other };

std::string_view to_string(LanguageKind k) noexcept;

/// Extension first; extensionless files fall back to a python shebang.
/// Anything containing NUL bytes is Other.
LanguageKind classify_file(std::string_view path, std::string_view contents);

enum class MitigationStatus { Unguarded, HardGuard, WarningOnly };

std::string_view to_string(MitigationStatus m) noexcept;
std::optional<MitigationStatus> parse_mitigation(std::string_view text) noexcept;

struct Finding {
  std::string rule_id;
  int cwe = 0;
  Severity severity = Severity::High;
  /// Root-relative, '/'-separated.
  std::string path;
  /// 1-based.
  std::size_t line = 0;
  /// 1-based byte column of the match.
  std::size_t column = 0;
  /// Source line, trimmed.
  std::string snippet;
  /// Exact text the rule pattern matched.
  std::string match;
  MitigationStatus guard = MitigationStatus::Unguarded;
  /// True only for a hard guard; warning-only guards do not mitigate.
  bool mitigated = false;
  std::optional<std::string> suppressed_by_filter;
  std::optional<Verdict> verdict;
  /// "vendored-from: <root>" on findings carried across a vendored copy.
  std::optional<std::string> provenance;

  /// Counts toward the score.
  bool scored() const noexcept { return !mitigated && !suppressed_by_filter; }

  friend bool operator==(const Finding&, const Finding&) = default;
};

/// Canonical order: (path, line, rule_id).
bool canonical_less(const Finding& a, const Finding& b) noexcept;

struct ScanOptions {
  bool include_test_paths = false;
  std::size_t guard_window = 12;
  bool follow_symlinks = false;
  std::uintmax_t max_file_bytes = 4u * 1024u * 1024u;
  /// Worker threads for scan_tree; output never depends on it.
  std::size_t workers = 1;
};

struct SkipNotice {
  std::string path;
  std::string reason;

  friend bool operator==(const SkipNotice&, const SkipNotice&) = default;
};

struct ScanResult {
  /// Root as given on the command line.
  std::string root;
  /// Display name: last path component of the root.
  std::string name;
  std::size_t files_scanned = 0;
  std::vector<SkipNotice> skips;
  std::vector<Finding> findings;

  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

class ScanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw rule hits after context predicates, sorted by (line, rule_id). At most
/// one finding per (rule, line). Guards and filters are not applied here.
std::vector<Finding> scan_file(std::string_view path, std::string_view contents, const RuleSet& rules,
                               const ScanOptions& options);

/// Looks up to options.guard_window lines above the finding, within its
/// scope, for a conditional on a sink identifier compared against a
/// constant. A raise/throw body is a hard guard; a body that only warns
/// is warning-only.
MitigationStatus detect_guard(std::string_view contents, const Finding& finding, const ScanOptions& options);

/// Marks test/benchmark/example/doc paths ("test-path") and sink-definition
/// lines ("definition-line"). Suppressed findings stay in the list.
std::vector<Finding> apply_production_filters(std::vector<Finding> findings, const ScanOptions& options);

/// scan_file + detect_guard + apply_production_filters for one file. Returns
/// nothing and sets `skip` when the file is oversized.
std::vector<Finding> analyze_file(std::string_view path, std::string_view contents, const RuleSet& rules,
                                  const ScanOptions& options, std::optional<SkipNotice>* skip = nullptr);

struct TreeListing {
  /// Regular files, sorted.
  std::vector<std::filesystem::path> files;
  std::vector<SkipNotice> skips;
};

/// Recursive walk shared by scanning and fingerprinting. Hidden directories
/// are skipped; symlinks are recorded as skips unless followed. Throws
/// ScanError when root is not a readable directory.
TreeListing list_tree(const std::filesystem::path& root, const ScanOptions& options);

/// Last path component of `root`, resolving "." and trailing slashes.
std::string display_name(const std::filesystem::path& root);

/// Root-relative, '/'-separated path.
std::string relative_path(const std::filesystem::path& root, const std::filesystem::path& file);

/// Whole file contents, or nothing when unreadable.
std::optional<std::string> read_file(const std::filesystem::path& path);

/// Recursively scans `root`. Throws ScanError when root is not a readable
/// directory. Findings are in canonical order regardless of worker count.
ScanResult scan_tree(const std::filesystem::path& root, const RuleSet& rules, const ScanOptions& options);

/// Fills Finding::verdict from the obligation linked to each finding's rule.
void attach_verdicts(std::vector<Finding>& findings, const RuleSet& rules, const ProofTable& proofs);

}  // namespace qai
