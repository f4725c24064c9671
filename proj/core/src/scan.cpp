#include "qai/scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "guard.hpp"
#include "qai/source_text.hpp"

namespace fs = std::filesystem;

namespace qai {

namespace {

constexpr std::array<std::string_view, 5> kCppExtensions{".hpp", ".cpp", ".cc", ".h", ".cu"};

constexpr std::array<std::string_view, 7> kNonProductionSegments{
    "test", "tests", "testing", "benchmark", "benchmarks", "examples", "docs"};

constexpr std::size_t kMaxCallLines = 8;

std::string_view extension_of(std::string_view path) {
  const auto slash = path.find_last_of('/');
  const auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  return name.substr(dot);
}

LanguageScope scope_for(LanguageKind kind) {
  switch (kind) {
    case LanguageKind::Cpp:
      return LanguageScope::Cpp;
    case LanguageKind::Python:
      return LanguageScope::Python;
    case LanguageKind::Qasm:
      return LanguageScope::Qasm;
    case LanguageKind::Other:
      break;
  }
  return LanguageScope::Any;
}

// Text between the call's parentheses, following continuation lines until
// the parentheses balance. Empty optional when no '(' follows the match.
std::optional<std::string> call_arguments(const std::vector<std::string>& code, std::size_t line_idx,
                                          std::size_t from) {
  const std::string& first = code[line_idx];
  const auto open = first.find('(', from);
  if (open == std::string::npos) return std::nullopt;
  std::string args;
  int depth = 0;
  for (std::size_t li = line_idx; li < code.size() && li < line_idx + kMaxCallLines; ++li) {
    const std::string& text = code[li];
    std::size_t start = li == line_idx ? open : 0;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '(' || c == '[' || c == '{') {
        if (++depth == 1) continue;  // the call's own parenthesis
      } else if (c == ')' || c == ']' || c == '}') {
        if (--depth == 0) return args;
      }
      args.push_back(c);
    }
    args.push_back(' ');
  }
  return args;
}

std::string first_argument(std::string_view args) {
  int depth = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const char c = args[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) return std::string(trim(args.substr(0, i)));
  }
  return std::string(trim(args));
}

// One or more adjacent quoted literals with optional r/b/u prefixes. The
// masked text leaves only quote characters and blanks inside literals.
bool is_string_literal(std::string_view arg) {
  static const Pattern literal(R"(^(?:(?:[rRbBuU]{0,2})(?:"[^"]*"|'[^']*')\s*)+$)");
  if (arg.empty()) return false;
  return !literal.find_all(arg).empty();
}

bool is_python_definition(std::string_view code_line) {
  static const Pattern def(R"(^\s*(?:async\s+)?def\s+\w+)");
  return !def.find_all(code_line).empty();
}

bool predicates_hold(const Rule& rule, const std::vector<std::string>& code, std::size_t line_idx,
                     const MatchSpan& span) {
  static const Pattern weights_only(R"(\bweights_only\s*=\s*True\b)");
  static const Pattern safe_loader(R"(\b(?:C?Safe|Base)Loader\b)");
  for (const auto pred : rule.predicates) {
    switch (pred) {
      case ContextPredicate::ArgNotStringLiteral: {
        const auto args = call_arguments(code, line_idx, span.begin);
        if (!args) return false;
        const auto arg = first_argument(*args);
        if (arg.empty() || is_string_literal(arg)) return false;
        break;
      }
      case ContextPredicate::NoWeightsOnlyFlag: {
        const auto args = call_arguments(code, line_idx, span.begin);
        if (args && !weights_only.find_all(*args).empty()) return false;
        break;
      }
      case ContextPredicate::NoSafeLoader: {
        const auto args = call_arguments(code, line_idx, span.begin);
        if (args && !safe_loader.find_all(*args).empty()) return false;
        break;
      }
      case ContextPredicate::CallsiteNotDefinition:
        if (is_python_definition(code[line_idx])) return false;
        break;
    }
  }
  return true;
}

bool in_non_production_path(std::string_view path) {
  std::size_t start = 0;
  while (true) {
    const auto slash = path.find('/', start);
    if (slash == std::string_view::npos) return false;  // last segment is the file name
    const auto segment = path.substr(start, slash - start);
    if (std::find(kNonProductionSegments.begin(), kNonProductionSegments.end(), segment) !=
        kNonProductionSegments.end()) {
      return true;
    }
    start = slash + 1;
  }
}

// The hit names the function being defined on this line, e.g. the call-site
// rule for from_qasm_str( firing on "def from_qasm_str(...)".
bool is_sink_definition(const Finding& f) {
  static const Pattern def(R"(^(?:async\s+)?def\s+\w+)");
  static const Pattern def_keyword(R"(\bdef\s)");
  return !def.find_all(f.snippet).empty() && def_keyword.find_all(f.match).empty();
}

struct FileOutcome {
  std::vector<Finding> findings;
  std::optional<SkipNotice> skip;
  bool scanned = false;
};

}  // namespace

std::string_view to_string(LanguageKind k) noexcept {
  switch (k) {
    case LanguageKind::Cpp:
      return "cpp";
    case LanguageKind::Python:
      return "python";
    case LanguageKind::Qasm:
      return "qasm";
    case LanguageKind::Other:
      return "other";
  }
  return "other";
}

std::string_view to_string(MitigationStatus m) noexcept {
  switch (m) {
    case MitigationStatus::Unguarded:
      return "unguarded";
    case MitigationStatus::HardGuard:
      return "hard_guard";
    case MitigationStatus::WarningOnly:
      return "warning_only";
  }
  return "unguarded";
}

std::optional<MitigationStatus> parse_mitigation(std::string_view text) noexcept {
  if (text == "unguarded") return MitigationStatus::Unguarded;
  if (text == "hard_guard") return MitigationStatus::HardGuard;
  if (text == "warning_only") return MitigationStatus::WarningOnly;
  return std::nullopt;
}

LanguageKind classify_file(std::string_view path, std::string_view contents) {
  const auto probe = contents.substr(0, std::min<std::size_t>(contents.size(), 8192));
  if (probe.find('\0') != std::string_view::npos) return LanguageKind::Other;
  const auto ext = extension_of(path);
  if (std::find(kCppExtensions.begin(), kCppExtensions.end(), ext) != kCppExtensions.end()) {
    return LanguageKind::Cpp;
  }
  if (ext == ".py") return LanguageKind::Python;
  if (ext == ".qasm") return LanguageKind::Qasm;
  if (ext.empty() && contents.starts_with("#!")) {
    const auto eol = contents.find('\n');
    if (contents.substr(0, eol).find("python") != std::string_view::npos) {
      return LanguageKind::Python;
    }
  }
  return LanguageKind::Other;
}

bool canonical_less(const Finding& a, const Finding& b) noexcept {
  return std::tie(a.path, a.line, a.rule_id) < std::tie(b.path, b.line, b.rule_id);
}

std::vector<Finding> scan_file(std::string_view path, std::string_view contents, const RuleSet& rules,
                               const ScanOptions& /*options*/) {
  std::vector<Finding> findings;
  const LanguageKind kind = classify_file(path, contents);
  if (kind == LanguageKind::Other && !rules.has_any_scope_rules()) return findings;
  const LanguageScope file_scope = scope_for(kind);

  const auto raw = split_lines(contents);
  const auto code = code_lines(kind, contents);

  for (std::size_t li = 0; li < code.size(); ++li) {
    const std::string& line = code[li];
    if (is_blank(line)) continue;  // blank or comment-only
    for (const Rule& rule : rules) {
      if (kind == LanguageKind::Other ? rule.scope != LanguageScope::Any : !rule.applies_to(file_scope)) {
        continue;
      }
      for (const MatchSpan& span : rule.pattern.find_all(line)) {
        if (!predicates_hold(rule, code, li, span)) continue;
        const std::string& raw_line = li < raw.size() ? raw[li] : line;
        Finding f;
        f.rule_id = rule.id;
        f.cwe = rule.cwe;
        f.severity = rule.severity;
        f.path = std::string(path);
        f.line = li + 1;
        f.column = span.begin + 1;
        f.snippet = std::string(trim(raw_line));
        f.match = raw_line.substr(std::min(span.begin, raw_line.size()), span.end - span.begin);
        findings.push_back(std::move(f));
        break;  // one finding per (rule, line)
      }
    }
  }
  std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.line, a.rule_id) < std::tie(b.line, b.rule_id);
  });
  return findings;
}

std::vector<Finding> apply_production_filters(std::vector<Finding> findings, const ScanOptions& options) {
  for (auto& f : findings) {
    if (!options.include_test_paths && in_non_production_path(f.path)) {
      f.suppressed_by_filter = "test-path";
    } else if (is_sink_definition(f)) {
      f.suppressed_by_filter = "definition-line";
    }
  }
  return findings;
}

std::vector<Finding> analyze_file(std::string_view path, std::string_view contents, const RuleSet& rules,
                                  const ScanOptions& options, std::optional<SkipNotice>* skip) {
  if (contents.size() > options.max_file_bytes) {
    if (skip) {
      *skip = SkipNotice{std::string(path),
                         "exceeds max_file_bytes (" + std::to_string(options.max_file_bytes) + ")"};
    }
    return {};
  }
  auto findings = scan_file(path, contents, rules, options);
  if (findings.empty()) return findings;
  const LanguageKind kind = classify_file(path, contents);
  const auto code = code_lines(kind, contents);
  for (auto& f : findings) {
    f.guard = detect_guard_in(code, kind, f, options);
    f.mitigated = f.guard == MitigationStatus::HardGuard;
  }
  return apply_production_filters(std::move(findings), options);
}

std::string relative_path(const fs::path& root, const fs::path& file) {
  return file.lexically_relative(root).generic_string();
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

std::string display_name(const fs::path& root) {
  auto normalized = root.lexically_normal();
  std::string name = normalized.has_filename() ? normalized.filename().string()
                                               : normalized.parent_path().filename().string();
  if (name.empty() || name == "." || name == "..") {
    std::error_code ec;
    const auto abs = fs::weakly_canonical(fs::absolute(root, ec), ec);
    name = abs.filename().string();
  }
  return name;
}

TreeListing list_tree(const fs::path& root, const ScanOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec) || ec) {
    throw ScanError("not a readable directory: " + root.string());
  }
  TreeListing listing;
  auto dir_opts = fs::directory_options::skip_permission_denied;
  if (options.follow_symlinks) dir_opts |= fs::directory_options::follow_directory_symlink;
  fs::recursive_directory_iterator it(root, dir_opts, ec);
  if (ec) throw ScanError("cannot open " + root.string() + ": " + ec.message());
  for (fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) {
      listing.skips.push_back({relative_path(root, it->path()), "unreadable: " + ec.message()});
      ec.clear();
      continue;
    }
    const auto& entry = *it;
    const auto name = entry.path().filename().string();
    if (entry.is_directory(ec) && name.starts_with(".")) {
      it.disable_recursion_pending();
      continue;
    }
    if (entry.is_symlink(ec) && !options.follow_symlinks) {
      listing.skips.push_back({relative_path(root, entry.path()), "symlink not followed"});
      if (entry.is_directory(ec)) it.disable_recursion_pending();
      continue;
    }
    if (entry.is_regular_file(ec)) listing.files.push_back(entry.path());
  }
  std::sort(listing.files.begin(), listing.files.end());
  return listing;
}

ScanResult scan_tree(const fs::path& root, const RuleSet& rules, const ScanOptions& options) {
  ScanResult result;
  TreeListing listing = list_tree(root, options);
  result.root = root.generic_string();
  result.name = display_name(root);
  const auto& files = listing.files;
  std::vector<SkipNotice> walk_skips = std::move(listing.skips);

  std::vector<FileOutcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string rel = relative_path(root, files[i]);
      FileOutcome& out = outcomes[i];
      std::error_code size_ec;
      const auto size = fs::file_size(files[i], size_ec);
      if (!size_ec && size > options.max_file_bytes) {
        out.skip = SkipNotice{rel, "exceeds max_file_bytes (" + std::to_string(options.max_file_bytes) + ")"};
        continue;
      }
      auto contents = read_file(files[i]);
      if (!contents) {
        out.skip = SkipNotice{rel, "unreadable"};
        continue;
      }
      const LanguageKind kind = classify_file(rel, *contents);
      if (kind == LanguageKind::Other && !rules.has_any_scope_rules()) continue;
      out.scanned = true;
      out.findings = analyze_file(rel, *contents, rules, options, &out.skip);
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, files.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  result.skips = std::move(walk_skips);
  for (auto& out : outcomes) {
    if (out.scanned) ++result.files_scanned;
    if (out.skip) result.skips.push_back(std::move(*out.skip));
    std::move(out.findings.begin(), out.findings.end(), std::back_inserter(result.findings));
  }
  std::sort(result.findings.begin(), result.findings.end(), canonical_less);
  std::sort(result.skips.begin(), result.skips.end(),
            [](const SkipNotice& a, const SkipNotice& b) { return a.path < b.path; });
  return result;
}

void attach_verdicts(std::vector<Finding>& findings, const RuleSet& rules, const ProofTable& proofs) {
  std::map<std::string, const ProofRow*, std::less<>> by_id;
  for (const auto& row : proofs.rows) by_id.emplace(row.id, &row);
  for (auto& f : findings) {
    const Rule* rule = rules.find(f.rule_id);
    if (!rule || !rule->obligation) continue;
    if (auto it = by_id.find(*rule->obligation); it != by_id.end()) f.verdict = it->second->verdict;
  }
}

}  // namespace qai
