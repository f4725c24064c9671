#include "qai/source_text.hpp"

#include <cctype>

#include "qai/scan.hpp"

namespace qai {

namespace {

bool is_ident_char(char c) noexcept { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void blank(std::string& s, std::size_t pos) {
  if (s[pos] != '\n') s[pos] = ' ';
}

// '#' comments, single/double and triple-quoted strings with escapes.
std::string mask_python(std::string_view src) {
  std::string out(src);
  std::size_t i = 0;
  const std::size_t n = out.size();
  while (i < n) {
    const char c = out[i];
    if (c == '#') {
      while (i < n && out[i] != '\n') blank(out, i++);
      continue;
    }
    if (c == '"' || c == '\'') {
      const bool triple = i + 2 < n && out[i + 1] == c && out[i + 2] == c;
      const std::size_t qlen = triple ? 3 : 1;
      i += qlen;
      while (i < n) {
        if (out[i] == '\\' && i + 1 < n) {
          blank(out, i);
          blank(out, i + 1);
          i += 2;
          continue;
        }
        if (out[i] == c && (!triple || (i + 2 < n && out[i + 1] == c && out[i + 2] == c))) {
          i += qlen;
          break;
        }
        if (!triple && out[i] == '\n') break;  // unterminated literal
        blank(out, i++);
      }
      continue;
    }
    ++i;
  }
  return out;
}

// //, /* */, "..." with escapes, '...' (not digit separators), R"d(...)d".
std::string mask_c_like(std::string_view src) {
  std::string out(src);
  std::size_t i = 0;
  const std::size_t n = out.size();
  while (i < n) {
    const char c = out[i];
    if (c == '/' && i + 1 < n && out[i + 1] == '/') {
      while (i < n && out[i] != '\n') blank(out, i++);
      continue;
    }
    if (c == '/' && i + 1 < n && out[i + 1] == '*') {
      blank(out, i++);
      blank(out, i++);
      while (i < n && !(out[i] == '*' && i + 1 < n && out[i + 1] == '/')) blank(out, i++);
      if (i < n) {
        blank(out, i++);
        blank(out, i++);
      }
      continue;
    }
    if (c == '"' && i > 0 && out[i - 1] == 'R' &&
        (i < 2 || !is_ident_char(out[i - 2]) || out[i - 2] == 'u' || out[i - 2] == 'L' || out[i - 2] == '8' ||
         out[i - 2] == 'U')) {
      const std::size_t open = src.find('(', i + 1);
      if (open != std::string_view::npos) {
        const std::string close = ")" + std::string(src.substr(i + 1, open - i - 1)) + "\"";
        const std::size_t end = src.find(close, open + 1);
        const std::size_t stop = end == std::string_view::npos ? n : end;
        for (std::size_t k = i + 1; k < stop; ++k) blank(out, k);
        i = end == std::string_view::npos ? n : end + close.size();
        continue;
      }
    }
    if (c == '\'' && i > 0 && std::isxdigit(static_cast<unsigned char>(out[i - 1])) && i + 1 < n &&
        std::isxdigit(static_cast<unsigned char>(out[i + 1]))) {
      // 1'000'000 digit separator, unless the quote opens a char literal.
      std::size_t k = i;
      while (k > 0 && is_ident_char(out[k - 1])) --k;
      if (k < i && std::isdigit(static_cast<unsigned char>(out[k]))) {
        ++i;
        continue;
      }
    }
    if (c == '"' || c == '\'') {
      ++i;
      while (i < n && out[i] != c && out[i] != '\n') {
        if (out[i] == '\\' && i + 1 < n) blank(out, i++);
        blank(out, i++);
      }
      if (i < n && out[i] == c) ++i;
      continue;
    }
    ++i;
  }
  return out;
}

}  // namespace

std::vector<std::string> split_lines(std::string_view contents) {
  std::vector<std::string> lines;
  std::string current;
  for (std::size_t i = 0; i < contents.size(); ++i) {
    const char c = contents[i];
    if (c == '\n' || c == '\r') {
      lines.push_back(std::move(current));
      current.clear();
      if (c == '\r' && i + 1 < contents.size() && contents[i + 1] == '\n') ++i;
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<std::string> code_lines(LanguageKind kind, std::string_view contents) {
  // Normalize line endings first so masked text lines up with split_lines().
  std::string normalized;
  normalized.reserve(contents.size());
  for (std::size_t i = 0; i < contents.size(); ++i) {
    if (contents[i] == '\r') {
      normalized.push_back('\n');
      if (i + 1 < contents.size() && contents[i + 1] == '\n') ++i;
    } else {
      normalized.push_back(contents[i]);
    }
  }
  switch (kind) {
    case LanguageKind::Python:
      return split_lines(mask_python(normalized));
    case LanguageKind::Cpp:
    case LanguageKind::Qasm:
      return split_lines(mask_c_like(normalized));
    case LanguageKind::Other:
      break;
  }
  return split_lines(normalized);
}

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::size_t indentation(std::string_view line) noexcept {
  std::size_t width = 0;
  for (const char c : line) {
    if (c == ' ') {
      ++width;
    } else if (c == '\t') {
      width = (width / 8 + 1) * 8;
    } else {
      break;
    }
  }
  return width;
}

bool is_blank(std::string_view line) noexcept { return trim(line).empty(); }

}  // namespace qai
