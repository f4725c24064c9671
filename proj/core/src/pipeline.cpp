#include "qai/pipeline.hpp"

#include <set>

namespace qai {

ScanReport build_scan_report(const ScanRequest& request, const RuleSet& rules) {
  ScanReport report;
  report.timestamp = request.timestamp;
  report.options = {request.options.include_test_paths,
                    request.options.guard_window,
                    request.options.follow_symlinks,
                    request.options.max_file_bytes,
                    request.verify,
                    rules.provenance()};
  report.rules = summarize(rules);

  std::set<std::string> names;
  std::vector<ScanResult> scans;
  for (const auto& root : request.roots) {
    scans.push_back(scan_tree(root, rules, request.options));
    if (!names.insert(scans.back().name).second) {
      throw DuplicateFrameworkError("two roots share the name '" + scans.back().name + "'");
    }
  }

  if (request.detect_vendoring && scans.size() > 1) {
    std::vector<TreeFingerprints> prints;
    for (const auto& root : request.roots) prints.push_back(fingerprint_tree(root, request.options));
    std::vector<PropagationEdge> edges;
    for (std::size_t i = 0; i < prints.size(); ++i) {
      for (std::size_t j = i + 1; j < prints.size(); ++j) {
        std::optional<VendorDirection> dir;
        if (request.direction) {
          const auto& d = *request.direction;
          auto names_pair = [&](const TreeFingerprints& t) {
            return d.source == t.name || d.source == t.root || d.target == t.name || d.target == t.root;
          };
          if (names_pair(prints[i]) && names_pair(prints[j])) dir = d;
        }
        for (auto& e : detect_vendoring(prints[i], prints[j], request.min_shared_files, dir)) {
          edges.push_back(std::move(e));
        }
      }
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < scans.size(); ++i) index[scans[i].name] = i;
    for (auto& e : edges) e.carried_findings = carry_findings(e, scans[index.at(e.source_root)].findings);
    // Carry after every edge has seen the original findings of its source.
    for (const auto& e : edges) {
      auto& target = scans[index.at(e.target_root)];
      target.findings = merge_findings(std::move(target.findings), e.carried_findings);
    }
    ChainReport chains = build_chain_report(std::move(edges));
    report.vendor = VendorSection{std::move(chains.edges), chains.rendered(), std::move(chains.warnings)};
  }

  if (request.verify) {
    report.proofs = run_obligations(builtin_obligations());
    for (auto& scan : scans) attach_verdicts(scan.findings, rules, *report.proofs);
    if (report.vendor) {
      for (auto& e : report.vendor->edges) attach_verdicts(e.carried_findings, rules, *report.proofs);
    }
  }

  for (auto& scan : scans) {
    RootReport root;
    root.score = score_findings(scan.name, scan.findings);
    if (auto it = request.orgs.find(scan.name); it != request.orgs.end()) root.org = it->second;
    root.scan = std::move(scan);
    report.roots.push_back(std::move(root));
  }
  return report;
}

ChainReport analyze_vendoring(const std::filesystem::path& a, const std::filesystem::path& b,
                              const RuleSet& rules, const ScanOptions& options, std::size_t min_shared_files,
                              const std::optional<VendorDirection>& direction) {
  const TreeFingerprints fa = fingerprint_tree(a, options);
  const TreeFingerprints fb = fingerprint_tree(b, options);
  auto edges = detect_vendoring(fa, fb, min_shared_files, direction);
  if (!edges.empty()) {
    const ScanResult sa = scan_tree(a, rules, options);
    const ScanResult sb = scan_tree(b, rules, options);
    for (auto& e : edges) {
      e.carried_findings = carry_findings(e, e.source_root == sa.name ? sa.findings : sb.findings);
    }
  }
  return build_chain_report(std::move(edges));
}

}  // namespace qai
