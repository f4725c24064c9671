#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qai/scan.hpp"

namespace qai {

enum class Grade { Secure, ReviewRequired, CriticalExposure, Broken };

/// "Secure", "Review Required", "Critical Exposure", "Broken".
std::string_view to_string(Grade g) noexcept;
std::optional<Grade> parse_grade(std::string_view text) noexcept;

/// Lower edges are inclusive: 85, 60, 30.
constexpr Grade grade_for(int score) noexcept {
  if (score >= 85) return Grade::Secure;
  if (score >= 60) return Grade::ReviewRequired;
  if (score >= 30) return Grade::CriticalExposure;
  return Grade::Broken;
}

struct ScoreResult {
  int score = 100;
  Grade grade = Grade::Secure;

  friend bool operator==(const ScoreResult&, const ScoreResult&) = default;
};

/// max(0, 100 - 20*crit - 8*high - 3*med).
ScoreResult compute_score(std::size_t crit, std::size_t high, std::size_t med) noexcept;

struct FrameworkScore {
  std::string name;
  std::size_t crit = 0;
  std::size_t high = 0;
  std::size_t med = 0;
  int score = 100;
  Grade grade = Grade::Secure;

  friend bool operator==(const FrameworkScore&, const FrameworkScore&) = default;
};

/// Counts only findings that are neither mitigated nor suppressed.
FrameworkScore score_findings(std::string name, const std::vector<Finding>& findings);

struct Scorecard {
  /// Score ascending, then name.
  std::vector<FrameworkScore> rows;
  std::size_t total_crit = 0;
  std::size_t total_high = 0;
  std::size_t total_med = 0;

  friend bool operator==(const Scorecard&, const Scorecard&) = default;
};

class DuplicateFrameworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws DuplicateFrameworkError when two entries share a name.
Scorecard build_scorecard(const std::vector<std::pair<std::string, std::vector<Finding>>>& trees);

/// Same, from precomputed rows.
Scorecard build_scorecard(std::vector<FrameworkScore> rows);

}  // namespace qai
