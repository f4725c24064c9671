#include "qai/rule.hpp"

#include <algorithm>
#include <array>
#include <boost/regex.hpp>
#include <utility>

namespace qai {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<std::string_view, E>, N>& table,
                        std::string_view text) noexcept {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, Severity>, 3> kSeverityNames{{
    {"CRITICAL", Severity::Critical},
    {"HIGH", Severity::High},
    {"MEDIUM", Severity::Medium},
}};

constexpr std::array<std::pair<std::string_view, LanguageScope>, 4> kScopeNames{{
    {"cpp", LanguageScope::Cpp},
    {"python", LanguageScope::Python},
    {"qasm", LanguageScope::Qasm},
    {"any", LanguageScope::Any},
}};

constexpr std::array<std::pair<std::string_view, ContextPredicate>, 4> kPredicateNames{{
    {"arg_not_string_literal", ContextPredicate::ArgNotStringLiteral},
    {"no_weights_only_flag", ContextPredicate::NoWeightsOnlyFlag},
    {"no_safe_loader", ContextPredicate::NoSafeLoader},
    {"callsite_not_definition", ContextPredicate::CallsiteNotDefinition},
}};

template <typename E, std::size_t N>
std::string_view reverse_lookup(const std::array<std::pair<std::string_view, E>, N>& table,
                                E value) noexcept {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

}  // namespace

std::string_view to_string(Severity s) noexcept { return reverse_lookup(kSeverityNames, s); }
std::optional<Severity> parse_severity(std::string_view text) noexcept {
  return lookup(kSeverityNames, text);
}

std::string_view to_string(LanguageScope s) noexcept { return reverse_lookup(kScopeNames, s); }
std::optional<LanguageScope> parse_scope(std::string_view text) noexcept { return lookup(kScopeNames, text); }

std::string_view to_string(ContextPredicate p) noexcept { return reverse_lookup(kPredicateNames, p); }
std::optional<ContextPredicate> parse_predicate(std::string_view text) noexcept {
  return lookup(kPredicateNames, text);
}

struct Pattern::Impl {
  boost::regex re;
};

Pattern::Pattern(std::string source) : source_(std::move(source)) {
  try {
    auto impl = std::make_shared<Impl>();
    impl->re = boost::regex(source_, boost::regex::perl);
    impl_ = std::move(impl);
  } catch (const boost::regex_error& e) {
    throw PatternError("invalid pattern '" + source_ + "': " + e.what());
  }
}

std::vector<MatchSpan> Pattern::find_all(std::string_view line) const {
  std::vector<MatchSpan> spans;
  boost::cregex_iterator it(line.data(), line.data() + line.size(), impl_->re);
  for (boost::cregex_iterator end; it != end; ++it) {
    const auto& m = *it;
    const auto begin = static_cast<std::size_t>(m.position(std::size_t{0}));
    spans.push_back({begin, begin + static_cast<std::size_t>(m.length(std::size_t{0}))});
  }
  return spans;
}

RuleSet::RuleSet(std::vector<Rule> rules, std::string provenance) : provenance_(std::move(provenance)) {
  for (auto& r : rules) upsert(std::move(r));
}

const Rule* RuleSet::find(std::string_view id) const noexcept {
  auto it = std::lower_bound(rules_.begin(), rules_.end(), id,
                             [](const Rule& r, std::string_view key) { return r.id < key; });
  if (it != rules_.end() && it->id == id) return &*it;
  return nullptr;
}

bool RuleSet::has_any_scope_rules() const noexcept {
  return std::any_of(rules_.begin(), rules_.end(),
                     [](const Rule& r) { return r.scope == LanguageScope::Any; });
}

void RuleSet::upsert(Rule rule) {
  auto it = std::lower_bound(rules_.begin(), rules_.end(), rule.id,
                             [](const Rule& r, const std::string& key) { return r.id < key; });
  if (it != rules_.end() && it->id == rule.id) {
    *it = std::move(rule);
  } else {
    rules_.insert(it, std::move(rule));
  }
}

RuleFileError::RuleFileError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace qai
