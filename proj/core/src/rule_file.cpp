#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qai/rule.hpp"
#include "qai/source_text.hpp"
#include "qai/verifier.hpp"

namespace qai {

namespace {

struct Record {
  std::size_t line = 0;
  std::map<std::string, std::pair<std::string, std::size_t>> fields;  // key -> (value, line)
};

const std::set<std::string, std::less<>> kKeys{"id",      "cwe",        "severity",   "scope",
                                               "pattern", "predicates", "obligation", "description"};
const std::set<std::string, std::less<>> kRequired{"id", "cwe", "severity", "scope", "pattern"};

int parse_cwe(std::string_view text, std::size_t line) {
  if (text.starts_with("CWE-")) text.remove_prefix(4);
  int value = 0;
  if (text.empty() || text.size() > 6) throw RuleFileError(line, "invalid cwe '" + std::string(text) + "'");
  for (char c : text) {
    if (c < '0' || c > '9') throw RuleFileError(line, "invalid cwe '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

std::vector<ContextPredicate> parse_predicates(std::string_view text, std::size_t line) {
  std::vector<ContextPredicate> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!item.empty()) {
      const auto p = parse_predicate(item);
      if (!p) throw RuleFileError(line, "unknown context predicate '" + std::string(item) + "'");
      out.push_back(*p);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Rule build(const Record& rec) {
  for (const auto& key : kRequired) {
    if (!rec.fields.count(key)) throw RuleFileError(rec.line, "rule is missing field '" + key + "'");
  }
  auto value = [&](const std::string& key) -> const std::string& { return rec.fields.at(key).first; };
  auto line_of = [&](const std::string& key) { return rec.fields.at(key).second; };

  const auto severity = parse_severity(value("severity"));
  if (!severity) throw RuleFileError(line_of("severity"), "unknown severity '" + value("severity") + "'");
  const auto scope = parse_scope(value("scope"));
  if (!scope) throw RuleFileError(line_of("scope"), "unknown scope '" + value("scope") + "'");
  if (value("id").empty()) throw RuleFileError(line_of("id"), "empty rule id");

  std::optional<Pattern> pattern;
  try {
    pattern.emplace(value("pattern"));
  } catch (const PatternError& e) {
    throw RuleFileError(line_of("pattern"), e.what());
  }

  std::optional<std::string> obligation;
  if (auto it = rec.fields.find("obligation"); it != rec.fields.end() && !it->second.first.empty()) {
    if (!builtin_obligations().find(it->second.first)) {
      throw RuleFileError(it->second.second, "unknown obligation '" + it->second.first + "'");
    }
    obligation = it->second.first;
  }

  std::vector<ContextPredicate> predicates;
  if (auto it = rec.fields.find("predicates"); it != rec.fields.end()) {
    predicates = parse_predicates(it->second.first, it->second.second);
  }
  std::string description;
  if (auto it = rec.fields.find("description"); it != rec.fields.end()) description = it->second.first;

  return Rule{value("id"),
              parse_cwe(value("cwe"), line_of("cwe")),
              *severity,
              *scope,
              std::move(*pattern),
              std::move(predicates),
              std::move(obligation),
              std::move(description)};
}

}  // namespace

RuleSet merge_rule_text(std::string_view text, const RuleSet& base, std::string provenance) {
  std::vector<Record> records;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[rule]") {
      records.push_back(Record{lineno, {}});
      continue;
    }
    if (line.front() == '[') throw RuleFileError(lineno, "unknown section '" + std::string(line) + "'");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw RuleFileError(lineno, "expected 'key = value'");
    if (records.empty()) throw RuleFileError(lineno, "field outside a [rule] record");
    const std::string key(trim(line.substr(0, eq)));
    if (!kKeys.count(key)) throw RuleFileError(lineno, "unknown field '" + key + "'");
    auto& fields = records.back().fields;
    if (fields.count(key)) throw RuleFileError(lineno, "field '" + key + "' repeated");
    fields.emplace(key, std::make_pair(std::string(trim(line.substr(eq + 1))), lineno));
  }

  RuleSet merged = base;
  std::set<std::string, std::less<>> seen;
  for (const auto& rec : records) {
    Rule rule = build(rec);
    if (!seen.insert(rule.id).second) {
      throw RuleFileError(rec.fields.at("id").second, "duplicate rule id '" + rule.id + "' in file");
    }
    merged.upsert(std::move(rule));
  }
  if (records.empty()) return merged;
  return RuleSet(std::vector<Rule>(merged.begin(), merged.end()), std::move(provenance));
}

RuleSet load_rule_file(const std::string& path, const RuleSet& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuleFileError(0, "cannot open rule file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return merge_rule_text(ss.str(), base, path);
}

std::string write_rule_text(const RuleSet& rules) {
  std::ostringstream out;
  bool first = true;
  for (const Rule& r : rules) {
    if (!first) out << '\n';
    first = false;
    out << "[rule]\n";
    out << "id = " << r.id << '\n';
    out << "cwe = " << r.cwe << '\n';
    out << "severity = " << to_string(r.severity) << '\n';
    out << "scope = " << to_string(r.scope) << '\n';
    out << "pattern = " << r.pattern.source() << '\n';
    if (!r.predicates.empty()) {
      out << "predicates = ";
      for (std::size_t i = 0; i < r.predicates.size(); ++i) {
        out << (i ? ", " : "") << to_string(r.predicates[i]);
      }
      out << '\n';
    }
    if (r.obligation) out << "obligation = " << *r.obligation << '\n';
    if (!r.description.empty()) out << "description = " << r.description << '\n';
  }
  return out.str();
}

}  // namespace qai
