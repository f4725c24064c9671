#pragma once

#include <string>
#include <vector>

#include "qai/scan.hpp"

namespace qai {

// detect_guard over lines already masked by code_lines, so a file with many
// findings is masked once.
MitigationStatus detect_guard_in(const std::vector<std::string>& code, LanguageKind kind,
                                 const Finding& finding, const ScanOptions& options);

}  // namespace qai
