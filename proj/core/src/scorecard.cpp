#include "qai/scorecard.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace qai {

std::string_view to_string(Grade g) noexcept {
  switch (g) {
    case Grade::Secure:
      return "Secure";
    case Grade::ReviewRequired:
      return "Review Required";
    case Grade::CriticalExposure:
      return "Critical Exposure";
    case Grade::Broken:
      return "Broken";
  }
  return "Broken";
}

std::optional<Grade> parse_grade(std::string_view text) noexcept {
  for (Grade g : {Grade::Secure, Grade::ReviewRequired, Grade::CriticalExposure, Grade::Broken}) {
    if (to_string(g) == text) return g;
  }
  return std::nullopt;
}

ScoreResult compute_score(std::size_t crit, std::size_t high, std::size_t med) noexcept {
  // Saturate before multiplying so huge counts cannot wrap.
  constexpr std::size_t kCap = 100;
  const long long deduction = static_cast<long long>(std::min(crit, kCap)) * weight(Severity::Critical) +
                              static_cast<long long>(std::min(high, kCap)) * weight(Severity::High) +
                              static_cast<long long>(std::min(med, kCap)) * weight(Severity::Medium);
  const int score = static_cast<int>(std::max(0LL, 100 - deduction));
  return {score, grade_for(score)};
}

FrameworkScore score_findings(std::string name, const std::vector<Finding>& findings) {
  FrameworkScore row;
  row.name = std::move(name);
  for (const auto& f : findings) {
    if (!f.scored()) continue;
    switch (f.severity) {
      case Severity::Critical:
        ++row.crit;
        break;
      case Severity::High:
        ++row.high;
        break;
      case Severity::Medium:
        ++row.med;
        break;
    }
  }
  const auto s = compute_score(row.crit, row.high, row.med);
  row.score = s.score;
  row.grade = s.grade;
  return row;
}

Scorecard build_scorecard(std::vector<FrameworkScore> rows) {
  std::set<std::string> names;
  for (const auto& r : rows) {
    if (!names.insert(r.name).second) {
      throw DuplicateFrameworkError("duplicate framework name '" + r.name + "'");
    }
  }
  std::sort(rows.begin(), rows.end(), [](const FrameworkScore& a, const FrameworkScore& b) {
    return std::tie(a.score, a.name) < std::tie(b.score, b.name);
  });
  Scorecard card;
  for (const auto& r : rows) {
    card.total_crit += r.crit;
    card.total_high += r.high;
    card.total_med += r.med;
  }
  card.rows = std::move(rows);
  return card;
}

Scorecard build_scorecard(const std::vector<std::pair<std::string, std::vector<Finding>>>& trees) {
  std::vector<FrameworkScore> rows;
  rows.reserve(trees.size());
  for (const auto& [name, findings] : trees) rows.push_back(score_findings(name, findings));
  return build_scorecard(std::move(rows));
}

}  // namespace qai
