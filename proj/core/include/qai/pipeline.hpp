#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qai/report.hpp"

namespace qai {

struct ScanRequest {
  std::vector<std::filesystem::path> roots;
  ScanOptions options;
  /// Run the obligation registry and attach verdicts to findings.
  bool verify = true;
  /// Look for vendored copies between every pair of roots and carry
  /// findings into the vendoring tree's score.
  bool detect_vendoring = false;
  std::size_t min_shared_files = 10;
  std::optional<VendorDirection> direction;
  /// Display name -> organisation column.
  std::map<std::string, std::string> orgs;
  std::string timestamp;
};

/// Scans every root and assembles the report. Throws ScanError for an
/// unreadable root and DuplicateFrameworkError when two roots share a name.
ScanReport build_scan_report(const ScanRequest& request, const RuleSet& rules);

/// Scans both roots, detects vendoring and carries the source findings.
ChainReport analyze_vendoring(const std::filesystem::path& a, const std::filesystem::path& b,
                              const RuleSet& rules, const ScanOptions& options, std::size_t min_shared_files,
                              const std::optional<VendorDirection>& direction);

}  // namespace qai
