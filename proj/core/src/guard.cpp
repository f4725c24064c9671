#include "guard.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "qai/scan.hpp"
#include "qai/source_text.hpp"

namespace qai {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Dotted identifiers in `text` that are neither called nor subscripted,
// e.g. "num_qubits" in "BITS[num_qubits]" or "self.n" in "np.zeros(2**self.n".
std::set<std::string> operand_identifiers(std::string_view text) {
  std::set<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!ident_start(text[i]) || (i > 0 && ident_char(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (true) {
      while (end < text.size() && ident_char(text[end])) ++end;
      if (end + 1 < text.size() && text[end] == '.' && ident_start(text[end + 1])) {
        ++end;
        continue;
      }
      break;
    }
    std::size_t next = end;
    while (next < text.size() && std::isspace(static_cast<unsigned char>(text[next]))) ++next;
    const bool called = next < text.size() && (text[next] == '(' || text[next] == '[');
    const bool scoped = next + 1 < text.size() && text[next] == ':' && text[next + 1] == ':';
    if (!called && !scoped) out.emplace(text.substr(i, end - i));
    i = end;
  }
  return out;
}

bool mentions_any(std::string_view condition, const std::set<std::string>& names) {
  const auto ids = operand_identifiers(condition);
  return std::any_of(names.begin(), names.end(),
                     [&](const std::string& name) { return ids.count(name) > 0; });
}

// A relational operator plus a numeric literal or an ALL_CAPS constant.
bool compares_against_constant(std::string_view condition) {
  static const Pattern relation(R"((?:<=|>=|==|!=|<|>))");
  static const Pattern constant(R"((?<![\w.])(?:\d+[uUlL]*|[A-Z][A-Z0-9_]*[A-Z0-9])(?![\w.(]))");
  return !relation.find_all(condition).empty() && !constant.find_all(condition).empty();
}

MitigationStatus classify_body(std::string_view body, LanguageKind kind) {
  static const Pattern py_raise(R"(\braise\b)");
  static const Pattern py_warn(
      R"(\bwarnings\.warn\b|\bwarn\s*\(|\blog(?:ger|ging)?\.warn(?:ing)?\b|\bprint\s*\()");
  static const Pattern cpp_throw(R"(\bthrow\b)");
  static const Pattern cpp_warn(
      R"(\bstd::cerr\b|\bstd::clog\b|\bfprintf\s*\(\s*stderr|\bprintf\s*\(|\bwarn\w*\s*\(|\bLOG\s*\(\s*WARN)");
  const bool python = kind == LanguageKind::Python;
  if (!(python ? py_raise : cpp_throw).find_all(body).empty()) return MitigationStatus::HardGuard;
  if (!(python ? py_warn : cpp_warn).find_all(body).empty()) return MitigationStatus::WarningOnly;
  return MitigationStatus::Unguarded;
}

MitigationStatus stronger(MitigationStatus a, MitigationStatus b) {
  auto rank = [](MitigationStatus m) {
    switch (m) {
      case MitigationStatus::HardGuard:
        return 2;
      case MitigationStatus::WarningOnly:
        return 1;
      case MitigationStatus::Unguarded:
        return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

MitigationStatus python_guard(const std::vector<std::string>& code, std::size_t sink,
                              const std::set<std::string>& names, std::size_t window) {
  static const Pattern if_line(R"(^\s*(?:if|elif)\s)");
  const std::size_t sink_indent = indentation(code[sink]);
  const std::size_t lowest = sink >= window ? sink - window : 0;
  MitigationStatus best = MitigationStatus::Unguarded;
  for (std::size_t i = sink; i-- > lowest;) {
    const std::string& line = code[i];
    if (is_blank(line)) continue;
    const std::size_t indent = indentation(line);
    if (indent < sink_indent) break;  // left the enclosing block
    if (indent > sink_indent || if_line.find_all(line).empty()) continue;

    const std::string_view stmt = trim(line);
    const auto colon = stmt.find(':', 2);
    if (colon == std::string_view::npos) continue;
    const std::string_view condition = stmt.substr(stmt.find(' '), colon - stmt.find(' '));
    if (!mentions_any(condition, names) || !compares_against_constant(condition)) continue;

    std::string body(trim(stmt.substr(colon + 1)));
    if (body.empty()) {
      for (std::size_t j = i + 1; j < sink; ++j) {
        if (is_blank(code[j])) continue;
        if (indentation(code[j]) <= indent) break;
        body += code[j];
        body += '\n';
      }
    }
    best = stronger(best, classify_body(body, LanguageKind::Python));
  }
  return best;
}

// Text from `from` (line, column) up to the end of the statement or braced
// block that follows an if-condition.
std::string cpp_statement_after(const std::vector<std::string>& code, std::size_t line, std::size_t column,
                                std::size_t limit) {
  std::string out;
  int braces = 0;
  int parens = 0;
  bool block = false;
  for (std::size_t li = line; li < limit; ++li) {
    const std::string& text = code[li];
    for (std::size_t i = li == line ? column : 0; i < text.size(); ++i) {
      const char c = text[i];
      out.push_back(c);
      if (c == '{') {
        if (braces == 0 && parens == 0 && trim(out).size() == 1) block = true;
        ++braces;
      } else if (c == '}') {
        if (--braces == 0 && block) return out;
      } else if (c == '(') {
        ++parens;
      } else if (c == ')') {
        --parens;
      } else if (c == ';' && braces == 0 && parens == 0 && !block) {
        return out;
      }
    }
    out.push_back('\n');
  }
  return out;
}

MitigationStatus cpp_guard(const std::vector<std::string>& code, std::size_t sink,
                           const std::set<std::string>& names, std::size_t window) {
  static const Pattern if_kw(R"(\bif\s*\()");
  const std::size_t lowest = sink >= window ? sink - window : 0;
  MitigationStatus best = MitigationStatus::Unguarded;
  int depth = 0;  // closing braces seen minus opening braces, scanning upward
  for (std::size_t i = sink; i-- > lowest;) {
    const std::string& line = code[i];
    bool scope_opened = false;
    for (std::size_t k = line.size(); k-- > 0;) {
      if (line[k] == '}') {
        ++depth;
      } else if (line[k] == '{') {
        if (depth == 0) {
          scope_opened = true;
          break;
        }
        --depth;
      }
    }
    if (scope_opened) break;
    if (depth != 0) continue;

    for (const MatchSpan& hit : if_kw.find_all(line)) {
      // Balanced condition, possibly spanning lines.
      std::string condition;
      int parens = 0;
      std::size_t end_line = i;
      std::size_t end_col = 0;
      bool closed = false;
      for (std::size_t li = i; li < sink && !closed; ++li) {
        const std::string& text = code[li];
        for (std::size_t c = li == i ? hit.end - 1 : 0; c < text.size(); ++c) {
          if (text[c] == '(') {
            if (parens++ == 0) continue;
          } else if (text[c] == ')') {
            if (--parens == 0) {
              end_line = li;
              end_col = c + 1;
              closed = true;
              break;
            }
          }
          condition.push_back(text[c]);
        }
        condition.push_back(' ');
      }
      if (!closed) continue;
      if (!mentions_any(condition, names) || !compares_against_constant(condition)) continue;
      const std::string body = cpp_statement_after(code, end_line, end_col, sink);
      best = stronger(best, classify_body(body, LanguageKind::Cpp));
    }
  }
  return best;
}

}  // namespace

MitigationStatus detect_guard_in(const std::vector<std::string>& code, LanguageKind kind,
                                 const Finding& finding, const ScanOptions& options) {
  if (kind != LanguageKind::Python && kind != LanguageKind::Cpp) return MitigationStatus::Unguarded;
  if (finding.line == 0 || finding.line > code.size()) return MitigationStatus::Unguarded;
  const auto names = operand_identifiers(finding.match);
  if (names.empty()) return MitigationStatus::Unguarded;
  const std::size_t sink = finding.line - 1;
  const std::size_t window = std::max<std::size_t>(1, options.guard_window);
  return kind == LanguageKind::Python ? python_guard(code, sink, names, window)
                                      : cpp_guard(code, sink, names, window);
}

MitigationStatus detect_guard(std::string_view contents, const Finding& finding, const ScanOptions& options) {
  const LanguageKind kind = classify_file(finding.path, contents);
  if (kind != LanguageKind::Python && kind != LanguageKind::Cpp) return MitigationStatus::Unguarded;
  return detect_guard_in(code_lines(kind, contents), kind, finding, options);
}

}  // namespace qai
