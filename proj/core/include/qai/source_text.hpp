#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qai {

enum class LanguageKind;

/// Splits on \n, \r\n and lone \r. A trailing newline does not produce an
/// extra empty line.
std::vector<std::string> split_lines(std::string_view contents);

/// Source lines with comment text and string-literal contents replaced by
/// spaces. Quote characters and string prefixes stay in place, so column
/// positions and literal boundaries are preserved.
std::vector<std::string> code_lines(LanguageKind kind, std::string_view contents);

std::string_view trim(std::string_view s) noexcept;

/// Number of leading spaces, tabs counted as advancing to the next multiple of 8.
std::size_t indentation(std::string_view line) noexcept;

bool is_blank(std::string_view line) noexcept;

}  // namespace qai
