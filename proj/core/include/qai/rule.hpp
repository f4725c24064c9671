#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qai {

enum class Severity { Critical, High, Medium };

/// Score deduction for one unmitigated finding: 20 / 8 / 3.
constexpr int weight(Severity s) noexcept {
  switch (s) {
    case Severity::Critical:
      return 20;
    case Severity::High:
      return 8;
    case Severity::Medium:
      return 3;
  }
  return 0;
}

std::string_view to_string(Severity s) noexcept;
std::optional<Severity> parse_severity(std::string_view text) noexcept;

enum class LanguageScope { Cpp, Python, Qasm, Any };

std::string_view to_string(LanguageScope s) noexcept;
std::optional<LanguageScope> parse_scope(std::string_view text) noexcept;

/// Closed set of per-match refinements a rule may request.
enum class ContextPredicate {
  ArgNotStringLiteral,
  NoWeightsOnlyFlag,
  NoSafeLoader,
  CallsiteNotDefinition,
};

std::string_view to_string(ContextPredicate p) noexcept;
std::optional<ContextPredicate> parse_predicate(std::string_view text) noexcept;

/// Half-open byte range of a pattern hit inside one line.
struct MatchSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compiled Perl-syntax regular expression. Cheap to copy, immutable.
class Pattern {
 public:
  /// Throws PatternError when `source` does not compile.
  explicit Pattern(std::string source);

  const std::string& source() const noexcept { return source_; }

  /// All non-overlapping hits, left to right.
  std::vector<MatchSpan> find_all(std::string_view line) const;

 private:
  struct Impl;
  std::string source_;
  std::shared_ptr<const Impl> impl_;
};

struct Rule {
  std::string id;
  int cwe = 0;
  Severity severity = Severity::High;
  LanguageScope scope = LanguageScope::Any;
  Pattern pattern;
  std::vector<ContextPredicate> predicates;
  std::optional<std::string> obligation;
  std::string description;

  bool applies_to(LanguageScope file_scope) const noexcept {
    return scope == LanguageScope::Any || scope == file_scope;
  }
};

/// Ordered, immutable-after-load rule library. Iteration is sorted by id.
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::vector<Rule> rules, std::string provenance);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  const Rule* find(std::string_view id) const noexcept;
  bool has_any_scope_rules() const noexcept;

  auto begin() const noexcept { return rules_.begin(); }
  auto end() const noexcept { return rules_.end(); }

  /// Inserts or replaces by id; keeps the sorted order.
  void upsert(Rule rule);

 private:
  std::vector<Rule> rules_;
  std::string provenance_ = "builtin";
};

class RuleFileError : public std::runtime_error {
 public:
  RuleFileError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

RuleSet load_builtin_rules();

/// Parses rule-file text and merges it over `base`. A record whose id already
/// exists in `base` replaces that rule.
RuleSet merge_rule_text(std::string_view text, const RuleSet& base, std::string provenance = "inline");

RuleSet load_rule_file(const std::string& path, const RuleSet& base);

/// Serializes rules in the rule-file format; parse(write(x)) == x.
std::string write_rule_text(const RuleSet& rules);

}  // namespace qai
