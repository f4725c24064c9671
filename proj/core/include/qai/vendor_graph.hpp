#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qai/scan.hpp"

namespace qai {

/// Canonical form used for hashing: LF line endings, trailing whitespace
/// removed, blank lines dropped, every kept line terminated by '\n'.
/// Comments are kept.
std::string normalize_source(std::string_view contents);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

struct Fingerprint {
  std::string rel_path;
  /// sha256_hex(normalize_source(contents)).
  std::string hash;
  std::uint64_t size_bytes = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct TreeFingerprints {
  std::string root;
  std::string name;
  /// Sorted by rel_path. Files that normalize to nothing are left out.
  std::vector<Fingerprint> files;
  std::vector<SkipNotice> skips;
};

/// One fingerprint per classifiable (C++, Python, QASM) source file.
TreeFingerprints fingerprint_tree(const std::filesystem::path& root, const ScanOptions& options = {});

struct SharedFile {
  std::string source_path;
  std::string target_path;
  std::string hash;
  std::uint64_t size_bytes = 0;

  friend bool operator==(const SharedFile&, const SharedFile&) = default;
};

struct PropagationEdge {
  std::string source_root;
  std::string target_root;
  /// Directory under which the shared files sit on each side ("" for the root).
  std::string source_prefix;
  std::string target_prefix;
  /// Same nesting depth on both sides, so the direction is a guess; the
  /// reverse edge is emitted too.
  bool bidirectional = false;
  std::size_t shared_files = 0;
  std::uint64_t shared_bytes = 0;
  /// Sorted by source_path.
  std::vector<SharedFile> files;
  std::vector<Finding> carried_findings;
};

/// "A:B" forces A to be the source and B the target. Names match either the
/// root as given or its display name.
struct VendorDirection {
  std::string source;
  std::string target;
};

/// Parses "A:B". Throws std::invalid_argument.
VendorDirection parse_vendor_direction(std::string_view text);

/// Finds the largest group of identical files that sit under one directory
/// prefix in each tree and emits an edge when it reaches min_shared_files.
/// The side with the deeper prefix is the target. Throws
/// std::invalid_argument when `direction` names neither tree.
std::vector<PropagationEdge> detect_vendoring(const TreeFingerprints& a, const TreeFingerprints& b,
                                              std::size_t min_shared_files = 10,
                                              const std::optional<VendorDirection>& direction = {});

/// Copies of `source_findings` located in shared files, re-pathed into the
/// target tree and tagged "vendored-from: <source_root>". Mitigation and
/// suppression status are kept.
std::vector<Finding> carry_findings(const PropagationEdge& edge, const std::vector<Finding>& source_findings);

/// Adds carried findings to a tree's own findings, keeping one per
/// (rule_id, path, line); the tree's own finding wins. Canonical order.
std::vector<Finding> merge_findings(std::vector<Finding> own, const std::vector<Finding>& carried);

struct ChainReport {
  std::vector<PropagationEdge> edges;
  /// Maximal simple paths over acyclic edges, as root names.
  std::vector<std::vector<std::string>> chains;
  std::vector<std::string> warnings;

  /// "A → B → C", one per chain.
  std::vector<std::string> rendered() const;
};

ChainReport build_chain_report(std::vector<PropagationEdge> edges);

}  // namespace qai
