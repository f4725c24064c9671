#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "qai/pipeline.hpp"

namespace qai::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string resolve_timestamp(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QAI_TIMESTAMP"); env && *env) return env;
  return utc_timestamp_now();
}

bool color_enabled(bool to_file) {
  if (to_file) return false;
  if (const char* env = std::getenv("QAI_NO_COLOR"); env && *env) return false;
  return ::isatty(STDOUT_FILENO) == 1;
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write " + out_path);
  file << text;
  if (!file) throw std::runtime_error("write failed: " + out_path);
}

RuleSet load_rules(const std::string& rules_path) {
  RuleSet rules = load_builtin_rules();
  if (!rules_path.empty()) rules = load_rule_file(rules_path, rules);
  return rules;
}

std::map<std::string, std::string> parse_orgs(const std::vector<std::string>& specs) {
  std::map<std::string, std::string> orgs;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--org expects NAME=ORG, got '" + s + "'");
    orgs[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return orgs;
}

struct ScanArgs {
  std::vector<std::string> roots;
  std::string rules;
  std::string format = "json";
  std::string out;
  std::optional<int> fail_under;
  bool include_tests = false;
  bool no_verify = false;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::size_t guard_window = 12;
  bool follow_symlinks = false;
  std::uintmax_t max_file_bytes = 4u * 1024u * 1024u;
  std::string timestamp;
  std::vector<std::string> orgs;
  bool vendoring = false;
  std::size_t min_shared = 10;
  std::string direction;
};

struct ProveArgs {
  std::string format = "text";
  std::string out;
};

struct VendorArgs {
  std::string a;
  std::string b;
  std::size_t min_shared = 10;
  std::string direction;
  std::string format = "text";
  std::string out;
  std::string rules;
  bool include_tests = false;
  std::string timestamp;
};

int do_scan(const ScanArgs& args, std::ostream& out, std::ostream& err) {
  ScanRequest req;
  for (const auto& r : args.roots) {
    std::error_code ec;
    if (!std::filesystem::is_directory(r, ec)) throw UsageError("not a directory: " + r);
    req.roots.emplace_back(r);
  }
  req.options.include_test_paths = args.include_tests;
  req.options.guard_window = args.guard_window;
  req.options.follow_symlinks = args.follow_symlinks;
  req.options.max_file_bytes = args.max_file_bytes;
  req.options.workers = args.jobs;
  req.verify = !args.no_verify;
  req.detect_vendoring = args.vendoring;
  req.min_shared_files = args.min_shared;
  if (!args.direction.empty()) req.direction = parse_vendor_direction(args.direction);
  req.orgs = parse_orgs(args.orgs);
  req.timestamp = resolve_timestamp(args.timestamp);

  const RuleSet rules = load_rules(args.rules);
  const ScanReport report = build_scan_report(req, rules);

  std::string text;
  if (args.format == "json") {
    text = emit_json(report);
  } else if (args.format == "sarif") {
    text = emit_sarif(report);
  } else {
    text = emit_markdown(report);
  }
  write_output(text, args.out, out);

  for (const auto& root : report.roots) {
    for (const auto& s : root.scan.skips)
      err << "qai: skipped " << root.scan.name << "/" << s.path << ": " << s.reason << '\n';
  }
  if (report.vendor) {
    for (const auto& w : report.vendor->warnings) err << "qai: warning: " << w << '\n';
  }
  if (args.fail_under) {
    for (const auto& root : report.roots) {
      if (root.score.score < *args.fail_under) {
        err << "qai: " << root.scan.name << " scored " << root.score.score << "/100, below --fail-under "
            << *args.fail_under << '\n';
        return kBelowThreshold;
      }
    }
  }
  return kOk;
}

int do_prove(const ProveArgs& args, std::ostream& out) {
  const ProofTable table = run_obligations(builtin_obligations());
  const bool to_file = !args.out.empty() && args.out != "-";
  const std::string text =
      args.format == "json" ? proof_table_json(table) : render_proof_text(table, color_enabled(to_file));
  write_output(text, args.out, out);
  return table.all_match() ? kOk : kBelowThreshold;
}

int do_vendor(const VendorArgs& args, std::ostream& out, std::ostream& err) {
  for (const auto& r : {args.a, args.b}) {
    std::error_code ec;
    if (!std::filesystem::is_directory(r, ec)) throw UsageError("not a directory: " + r);
  }
  std::optional<VendorDirection> dir;
  if (!args.direction.empty()) dir = parse_vendor_direction(args.direction);
  ScanOptions options;
  options.include_test_paths = args.include_tests;
  const RuleSet rules = load_rules(args.rules);
  const ChainReport report = analyze_vendoring(args.a, args.b, rules, options, args.min_shared, dir);
  const std::string text = args.format == "json" ? vendor_json(report, resolve_timestamp(args.timestamp))
                                                 : render_vendor_text(report);
  write_output(text, args.out, out);
  for (const auto& w : report.warnings) err << "qai: warning: " << w << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qai: quantum-framework source scanner with bitvector proof obligations", "qai"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Scan source trees and report findings and scores");
  scan_cmd->add_option("roots", scan.roots, "Source tree roots")->required();
  scan_cmd->add_option("--rules", scan.rules, "Rule file merged over the builtin library");
  scan_cmd->add_option("--format", scan.format, "Output format")
      ->check(CLI::IsMember({"json", "sarif", "markdown"}));
  scan_cmd->add_option("--out", scan.out, "Write the report here instead of stdout");
  scan_cmd->add_option("--fail-under", scan.fail_under, "Exit 1 when any score is below N")
      ->check(CLI::Range(0, 100));
  scan_cmd->add_flag("--include-tests", scan.include_tests, "Keep findings under test/doc paths");
  scan_cmd->add_flag("--no-verify", scan.no_verify, "Skip proof obligations and verdicts");
  scan_cmd->add_option("--jobs,-j", scan.jobs, "Worker threads")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--guard-window", scan.guard_window, "Lines searched above a sink for a guard")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_flag("--follow-symlinks", scan.follow_symlinks, "Follow symbolic links");
  scan_cmd->add_option("--max-file-bytes", scan.max_file_bytes, "Skip larger files")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--timestamp", scan.timestamp, "Fixed report timestamp");
  scan_cmd->add_option("--org", scan.orgs, "NAME=ORG for the scorecard Org column");
  scan_cmd->add_flag("--vendoring", scan.vendoring, "Detect vendored copies between roots");
  scan_cmd->add_option("--min-shared-files", scan.min_shared, "Vendoring threshold")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--vendor-direction", scan.direction, "SOURCE:TARGET override");

  ProveArgs prove;
  auto* prove_cmd = app.add_subcommand("prove", "Solve the builtin proof obligations");
  prove_cmd->add_option("--format", prove.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  prove_cmd->add_option("--out", prove.out, "Write the table here instead of stdout");

  std::string rules_file;
  auto* rules_cmd = app.add_subcommand("rules", "Print the effective rule set in rule-file format");
  rules_cmd->add_option("--rules", rules_file, "Rule file merged over the builtin library");

  VendorArgs vendor;
  auto* vendor_cmd = app.add_subcommand("vendor", "Detect a vendored copy between two trees");
  vendor_cmd->add_option("rootA", vendor.a, "First tree")->required();
  vendor_cmd->add_option("rootB", vendor.b, "Second tree")->required();
  vendor_cmd->add_option("--min-shared-files", vendor.min_shared, "Identical files needed for an edge")
      ->check(CLI::PositiveNumber);
  vendor_cmd->add_option("--vendor-direction", vendor.direction, "SOURCE:TARGET override");
  vendor_cmd->add_option("--format", vendor.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  vendor_cmd->add_option("--out", vendor.out, "Write the report here instead of stdout");
  vendor_cmd->add_option("--rules", vendor.rules, "Rule file merged over the builtin library");
  vendor_cmd->add_flag("--include-tests", vendor.include_tests, "Keep findings under test/doc paths");
  vendor_cmd->add_option("--timestamp", vendor.timestamp, "Fixed report timestamp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return kUsage;
  }

  try {
    if (*scan_cmd) return do_scan(scan, out, err);
    if (*prove_cmd) return do_prove(prove, out);
    if (*vendor_cmd) return do_vendor(vendor, out, err);
    if (*rules_cmd) {
      write_output(write_rule_text(load_rules(rules_file)), "", out);
      return kOk;
    }
    err << app.help();
    return kUsage;
  } catch (const UsageError& e) {
    err << "qai: " << e.what() << '\n';
    return kUsage;
  } catch (const RuleFileError& e) {
    err << "qai: rule file: " << e.what() << '\n';
    return kUsage;
  } catch (const ScanError& e) {
    err << "qai: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "qai: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "qai: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace qai::cli
