#pragma once

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topovote/audit.hpp"
#include "topovote/json_io.hpp"

namespace topovote::cli {

/// Exit codes: 0 for positive results, 2 for structured negative findings
/// (not certified, additivity failure, no witness at this resolution),
/// 1 for usage and runtime errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct Options {
  std::string rule_name;
  std::string family_name;
  int winner = 1;
  double angle = 0.0;
  int k = 3;
  int dim = 1;
  int net_size = 0;  // 0 keeps each command's own default
  int level = 5;
  int multistarts = 16;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
};

namespace detail {

inline void add_flags(CLI::App* cmd, Options& o, bool wants_rule) {
  if (wants_rule) {
    cmd->add_option("--rule", o.rule_name, "builtin rule name")->required();
  } else {
    cmd->add_option("--family", o.family_name, "builtin rule family name")->required();
  }
  cmd->add_option("--winner", o.winner, "winning voter for dictator rules (1-based)");
  cmd->add_option("--angle", o.angle, "rotation angle in radians for rotated_dictator");
  cmd->add_option("--k", o.k, "number of voters");
  cmd->add_option("--dim", o.dim, "sphere dimension n");
  cmd->add_option("--net-size", o.net_size, "sample net size / winding samples");
  cmd->add_option("--level", o.level, "icosphere subdivision level for S^2 degrees");
  cmd->add_option("--multistarts", o.multistarts, "starts for the antipodal-point search");
  cmd->add_option("--seed", o.seed, "seed for every randomized component");
  cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

inline json rule_spec(const Options& o) {
  return json{{"name", o.rule_name},
              {"k", o.k},
              {"dim_n", o.dim},
              {"params", json{{"winner", o.winner}, {"angle", o.angle}}}};
}

inline json family_spec(const Options& o) {
  return json{{"name", o.family_name},
              {"dim_n", o.dim},
              {"params", json{{"winner", o.winner}, {"angle", o.angle}}}};
}

inline AuditConfig audit_config(const Options& o) {
  AuditConfig cfg;
  if (o.net_size > 0) cfg.degree.winding.initial_samples = o.net_size;
  cfg.degree.simplicial.subdivision_level = o.level;
  cfg.degree.simplicial.seed = o.seed;
  cfg.antipode.multistarts = o.multistarts;
  cfg.antipode.seed = o.seed;
  if (o.net_size > 0) cfg.witness_net_size = o.net_size;
  cfg.seed = o.seed;
  return cfg;
}

inline SearchConfig search_config(const Options& o) {
  SearchConfig cfg;
  if (o.net_size > 0) cfg.net_size = o.net_size;
  cfg.seed = o.seed;
  return cfg;
}

inline void emit(const Options& o, const json& j, const std::string& csv) {
  const std::string text = o.format == "csv" ? csv : j.dump(2) + "\n";
  if (o.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(o.out_path, text);
  }
}

}  // namespace detail

/// Parse and run one invocation.  `args` excludes the program name.
inline int run(std::vector<std::string> args) {
  CLI::App app{"topological degree reports and paradox certificates for aggregation rules on spheres",
               "topovote"};
  app.require_subcommand(1);
  Options o;

  CLI::App* audit_twin = app.add_subcommand(
      "audit-twin", "prove a twin violation for a rule and emit the certificate");
  detail::add_flags(audit_twin, o, /*wants_rule=*/true);
  CLI::App* audit_noshow = app.add_subcommand(
      "audit-noshow", "prove a participation violation for a rule family");
  detail::add_flags(audit_noshow, o, /*wants_rule=*/false);
  CLI::App* degree_cmd = app.add_subcommand(
      "degree", "coordinate and pairwise degrees with the additivity check");
  detail::add_flags(degree_cmd, o, /*wants_rule=*/true);
  CLI::App* witness_twin = app.add_subcommand(
      "witness-twin", "search for a twin violation by grid plus refinement");
  detail::add_flags(witness_twin, o, /*wants_rule=*/true);
  CLI::App* witness_noshow = app.add_subcommand(
      "witness-noshow", "search for a participation violation by grid plus refinement");
  detail::add_flags(witness_noshow, o, /*wants_rule=*/false);
  CLI::App* nau_scan = app.add_subcommand(
      "nau-scan", "scan the unanimity diagonal for anti-unanimous points");
  detail::add_flags(nau_scan, o, /*wants_rule=*/true);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (audit_twin->parsed()) {
      const AuditReport report = run_twin_audit(rule_from_spec(detail::rule_spec(o)),
                                                detail::audit_config(o));
      detail::emit(o, to_json(report), to_csv(report));
      return report.status == AuditStatus::proved_with_witness ? kExitOk : kExitNegative;
    }
    if (audit_noshow->parsed()) {
      const AuditReport report = run_noshow_audit(family_from_spec(detail::family_spec(o)), o.k,
                                                  detail::audit_config(o));
      detail::emit(o, to_json(report), to_csv(report));
      return report.status == AuditStatus::proved_with_witness ? kExitOk : kExitNegative;
    }
    if (degree_cmd->parsed()) {
      const DegreeReport report = coordinate_degrees(rule_from_spec(detail::rule_spec(o)),
                                                     detail::audit_config(o).degree);
      detail::emit(o, to_json(report), to_csv(report));
      return report.additivity_ok ? kExitOk : kExitNegative;
    }
    if (witness_twin->parsed()) {
      const SearchResult result = search_twin_violation(rule_from_spec(detail::rule_spec(o)),
                                                        detail::search_config(o));
      detail::emit(o, to_json(result), to_csv(result));
      return result.certificate ? kExitOk : kExitNegative;
    }
    if (witness_noshow->parsed()) {
      const SearchResult result = search_noshow_violation(
          family_from_spec(detail::family_spec(o)), o.k, detail::search_config(o));
      detail::emit(o, to_json(result), to_csv(result));
      return result.certificate ? kExitOk : kExitNegative;
    }
    // nau-scan
    const AggregationRule rule = rule_from_spec(detail::rule_spec(o));
    const SampleNet net =
        covering_net(rule.dim_n(), o.net_size > 0 ? o.net_size : 64, o.seed);
    const NauScanResult scan = scan_nau(diagonal_map(rule), net, rule.lipschitz_bound());
    detail::emit(o, to_json(scan), to_csv(scan));
    return scan.certified ? kExitOk : kExitNegative;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args));
}

}  // namespace topovote::cli
