#include "qai/vendor_graph.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "qai/source_text.hpp"

namespace fs = std::filesystem;

namespace qai {

namespace {

std::vector<std::string_view> components(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto part = path.substr(start, slash == std::string_view::npos ? path.npos : slash - start);
    if (!part.empty()) out.push_back(part);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return out;
}

std::string join(const std::vector<std::string_view>& parts, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += '/';
    out += parts[i];
  }
  return out;
}

std::size_t depth(std::string_view prefix) { return components(prefix).size(); }

// Directory prefixes left after removing the longest common path suffix.
std::pair<std::string, std::string> split_prefixes(std::string_view a, std::string_view b) {
  const auto ca = components(a);
  const auto cb = components(b);
  std::size_t common = 0;
  while (common < ca.size() && common < cb.size() &&
         ca[ca.size() - 1 - common] == cb[cb.size() - 1 - common]) {
    ++common;
  }
  return {join(ca, ca.size() - common), join(cb, cb.size() - common)};
}

bool names_tree(std::string_view label, const TreeFingerprints& t) {
  return label == t.name || label == t.root;
}

PropagationEdge make_edge(const TreeFingerprints& src, const TreeFingerprints& dst,
                          const std::string& src_prefix, const std::string& dst_prefix,
                          std::vector<SharedFile> files, bool bidirectional) {
  PropagationEdge e;
  e.source_root = src.name;
  e.target_root = dst.name;
  e.source_prefix = src_prefix;
  e.target_prefix = dst_prefix;
  e.bidirectional = bidirectional;
  std::sort(files.begin(), files.end(),
            [](const SharedFile& x, const SharedFile& y) { return x.source_path < y.source_path; });
  e.shared_files = files.size();
  for (const auto& f : files) e.shared_bytes += f.size_bytes;
  e.files = std::move(files);
  return e;
}

std::vector<SharedFile> reversed(const std::vector<SharedFile>& files) {
  std::vector<SharedFile> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back({f.target_path, f.source_path, f.hash, f.size_bytes});
  return out;
}

}  // namespace

std::string normalize_source(std::string_view contents) {
  std::string out;
  out.reserve(contents.size());
  for (const auto& line : split_lines(contents)) {
    const auto end = line.find_last_not_of(" \t\f\v");
    if (end == std::string::npos) continue;
    out.append(line, 0, end + 1);
    out += '\n';
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

TreeFingerprints fingerprint_tree(const fs::path& root, const ScanOptions& options) {
  TreeListing listing = list_tree(root, options);
  TreeFingerprints out;
  out.root = root.generic_string();
  out.name = display_name(root);
  out.skips = std::move(listing.skips);
  for (const auto& file : listing.files) {
    const std::string rel = relative_path(root, file);
    auto contents = read_file(file);
    if (!contents) {
      out.skips.push_back({rel, "unreadable"});
      continue;
    }
    if (classify_file(rel, *contents) == LanguageKind::Other) continue;
    const std::string normalized = normalize_source(*contents);
    if (normalized.empty()) continue;  // every empty __init__.py would match
    out.files.push_back({rel, sha256_hex(normalized), contents->size()});
  }
  std::sort(out.skips.begin(), out.skips.end(),
            [](const SkipNotice& x, const SkipNotice& y) { return x.path < y.path; });
  return out;
}

VendorDirection parse_vendor_direction(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw std::invalid_argument("vendor direction must look like SOURCE:TARGET, got '" + std::string(text) +
                                "'");
  }
  return {std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

std::vector<PropagationEdge> detect_vendoring(const TreeFingerprints& a, const TreeFingerprints& b,
                                              std::size_t min_shared_files,
                                              const std::optional<VendorDirection>& direction) {
  // Candidate pairs grouped by the (prefix in a, prefix in b) they imply.
  std::multimap<std::string, const Fingerprint*> by_hash;
  for (const auto& f : b.files) by_hash.emplace(f.hash, &f);
  std::map<std::pair<std::string, std::string>, std::vector<SharedFile>> groups;
  for (const auto& fa : a.files) {
    auto [lo, hi] = by_hash.equal_range(fa.hash);
    for (auto it = lo; it != hi; ++it) {
      const Fingerprint& fb = *it->second;
      groups[split_prefixes(fa.rel_path, fb.rel_path)].push_back(
          {fa.rel_path, fb.rel_path, fa.hash, fa.size_bytes});
    }
  }

  const std::pair<std::string, std::string>* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [key, files] : groups) {
    if (files.size() > best_count) {
      best = &key;
      best_count = files.size();
    }
  }
  if (!best || best_count < std::max<std::size_t>(1, min_shared_files)) return {};

  const auto& [prefix_a, prefix_b] = *best;
  const auto& files = groups.at(*best);

  if (direction) {
    if (names_tree(direction->source, a) && names_tree(direction->target, b)) {
      return {make_edge(a, b, prefix_a, prefix_b, files, false)};
    }
    if (names_tree(direction->source, b) && names_tree(direction->target, a)) {
      return {make_edge(b, a, prefix_b, prefix_a, reversed(files), false)};
    }
    throw std::invalid_argument("vendor direction " + direction->source + ":" + direction->target +
                                " does not name the two trees");
  }

  const std::size_t da = depth(prefix_a);
  const std::size_t db = depth(prefix_b);
  if (da < db) return {make_edge(a, b, prefix_a, prefix_b, files, false)};
  if (db < da) return {make_edge(b, a, prefix_b, prefix_a, reversed(files), false)};
  std::vector<PropagationEdge> both{make_edge(a, b, prefix_a, prefix_b, files, true),
                                    make_edge(b, a, prefix_b, prefix_a, reversed(files), true)};
  std::sort(both.begin(), both.end(), [](const PropagationEdge& x, const PropagationEdge& y) {
    return std::tie(x.source_root, x.target_root) < std::tie(y.source_root, y.target_root);
  });
  return both;
}

std::vector<Finding> carry_findings(const PropagationEdge& edge,
                                    const std::vector<Finding>& source_findings) {
  std::map<std::string, std::string, std::less<>> target_of;
  for (const auto& f : edge.files) target_of.emplace(f.source_path, f.target_path);
  std::vector<Finding> carried;
  for (const auto& f : source_findings) {
    auto it = target_of.find(f.path);
    if (it == target_of.end()) continue;
    Finding copy = f;
    copy.path = it->second;
    copy.provenance = "vendored-from: " + edge.source_root;
    carried.push_back(std::move(copy));
  }
  std::sort(carried.begin(), carried.end(), canonical_less);
  return carried;
}

std::vector<Finding> merge_findings(std::vector<Finding> own, const std::vector<Finding>& carried) {
  std::set<std::tuple<std::string, std::string, std::size_t>> seen;
  for (const auto& f : own) seen.emplace(f.rule_id, f.path, f.line);
  for (const auto& f : carried) {
    if (seen.emplace(f.rule_id, f.path, f.line).second) own.push_back(f);
  }
  std::sort(own.begin(), own.end(), canonical_less);
  return own;
}

std::vector<std::string> ChainReport::rendered() const {
  std::vector<std::string> out;
  for (const auto& chain : chains) {
    std::string line;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) line += " → ";
      line += chain[i];
    }
    out.push_back(std::move(line));
  }
  return out;
}

ChainReport build_chain_report(std::vector<PropagationEdge> edges) {
  ChainReport report;
  std::sort(edges.begin(), edges.end(), [](const PropagationEdge& x, const PropagationEdge& y) {
    return std::tie(x.source_root, x.target_root) < std::tie(y.source_root, y.target_root);
  });

  std::map<std::string, std::set<std::string>> succ;
  std::set<std::string> nodes;
  for (const auto& e : edges) {
    succ[e.source_root].insert(e.target_root);
    nodes.insert(e.source_root);
    nodes.insert(e.target_root);
  }

  // An edge lies on a cycle when its source is reachable from its target.
  auto reaches = [&](const std::string& from, const std::string& to) {
    std::set<std::string> visited;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      if (cur == to) return true;
      if (!visited.insert(cur).second) continue;
      if (auto it = succ.find(cur); it != succ.end()) {
        stack.insert(stack.end(), it->second.begin(), it->second.end());
      }
    }
    return false;
  };

  std::map<std::string, std::set<std::string>> acyclic;
  std::map<std::string, std::size_t> indegree;
  for (const auto& n : nodes) indegree[n] = 0;
  for (const auto& e : edges) {
    if (e.source_root == e.target_root || reaches(e.target_root, e.source_root)) {
      report.warnings.push_back("cycle: " + e.source_root + " → " + e.target_root +
                                " is part of a vendoring cycle; no chain runs through it");
      continue;
    }
    if (acyclic[e.source_root].insert(e.target_root).second) ++indegree[e.target_root];
  }

  std::function<void(std::vector<std::string>&)> extend = [&](std::vector<std::string>& path) {
    auto it = acyclic.find(path.back());
    if (it == acyclic.end() || it->second.empty()) {
      report.chains.push_back(path);
      return;
    }
    for (const auto& next : it->second) {
      path.push_back(next);
      extend(path);
      path.pop_back();
    }
  };
  for (const auto& [node, deg] : indegree) {
    if (deg != 0 || !acyclic.count(node)) continue;
    std::vector<std::string> path{node};
    extend(path);
  }

  report.edges = std::move(edges);
  return report;
}

}  // namespace qai
