#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topovote/conditions.hpp"
#include "topovote/degree.hpp"
#include "topovote/rules.hpp"

namespace topovote {

/// Integer verdict on the system { d_i + d_j = 1 for all i != j } over k
/// unknowns.  For k >= 3 the system forces the non-integer d_1 = 1/2; for
/// k = 2 it is satisfiable.
struct DegreeSystemVerdict {
  int k = 0;
  bool unsat = false;
  std::vector<int> witness_solution;         // set when satisfiable
  std::vector<std::string> refutation_trace;  // set when unsatisfiable
};

inline DegreeSystemVerdict solve_twin_degree_system(int k) {
  if (k < 2) throw BadK("degree system needs k >= 2, got " + std::to_string(k));
  DegreeSystemVerdict verdict;
  verdict.k = k;
  if (k == 2) {
    verdict.unsat = false;
    // d1 = t, d2 = 1 - t parameterizes every solution; the dictator
    // realizes (1, 0).
    verdict.witness_solution = {1, 0};
    return verdict;
  }
  verdict.unsat = true;
  verdict.refutation_trace = {
      "d1 + d2 = 1",
      "d1 + d3 = 1",
      "d2 + d3 = 1",
      "(d1 + d2) + (d1 + d3) - (d2 + d3) = 1  =>  2*d1 = 1",
      "d1 = 1/2, not an integer",
  };
  return verdict;
}

enum class AuditStatus { proved_with_witness, degrees_unavailable, rule_partial_detected };

inline std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::proved_with_witness: return "proved_with_witness";
    case AuditStatus::degrees_unavailable: return "degrees_unavailable";
    case AuditStatus::rule_partial_detected: return "rule_partial_detected";
  }
  throw BadParams("unknown audit status");
}

struct AuditConfig {
  DegreeConfig degree;
  AntipodeSearchConfig antipode;
  int witness_net_size = 64;  // net used to pick the partner preference y
  std::uint64_t seed = 0;
};

/// End-to-end audit trace: degrees, the selected pair, its antipodal point,
/// and the verified violation certificate.
struct AuditReport {
  std::string subject;  // rule or family name
  ConditionId mode = ConditionId::twin;
  AuditStatus status = AuditStatus::degrees_unavailable;
  DegreeReport degrees;
  std::optional<std::pair<int, int>> chosen_pair;
  std::optional<SpherePoint> antipodal_point;
  double antipode_residual = 0.0;
  std::optional<ViolationCertificate> certificate;
  std::int64_t wall_time_ms = 0;
};

namespace detail {

/// Smallest lexicographic pair with deg(f_{i,j}) != 1.  When the degree set
/// is complete and additivity holds, the degree-system verdict guarantees
/// such a pair exists for k >= 3; its absence would mean the measured
/// degrees solve an unsolvable system.
inline std::pair<int, int> pick_degree_defect_pair(const DegreeReport& report) {
  for (const auto& p : report.pairs) {
    if (p.deg && *p.deg != 1) return {p.i, p.j};
  }
  throw Error("internal: all pairwise degrees equal 1, contradicting the integer verdict");
}

inline SpherePoint pick_partner_preference(const SpherePoint& x0, int dim_n, int net_size,
                                           std::uint64_t seed) {
  const SampleNet net = covering_net(dim_n, net_size, seed);
  for (const auto& y : net.points) {
    if (geodesic_distance(y, x0) > 0.5) return y;
  }
  throw Error("internal: no net point far enough from x0");
}

}  // namespace detail

/// Theorem audit for the Twin Condition: measure degrees, check the
/// additivity law, pick a pair whose restriction cannot be homotopic to the
/// identity, locate its antipodal point, and construct the verified twin
/// violation that point forces.
inline AuditReport run_twin_audit(const AggregationRule& rule, const AuditConfig& cfg = {}) {
  if (rule.k() < 3) {
    throw BadK("twin audit requires k >= 3 (the degree system is satisfiable at k = 2)");
  }
  if (rule.dim_n() != 1 && rule.dim_n() != 2) {
    throw UnsupportedDimension("twin audit requires dim_n in {1, 2}");
  }
  const auto t0 = std::chrono::steady_clock::now();
  AuditReport report;
  report.subject = rule.name();
  report.mode = ConditionId::twin;
  report.degrees = coordinate_degrees(rule, cfg.degree);

  const auto finish = [&](AuditStatus status) {
    report.status = status;
    report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
    return report;
  };

  if (!report.degrees.complete()) return finish(AuditStatus::degrees_unavailable);
  if (!report.degrees.additivity_ok) return finish(AuditStatus::rule_partial_detected);

  const DegreeSystemVerdict verdict = solve_twin_degree_system(rule.k());
  if (!verdict.unsat) throw Error("internal: degree system satisfiable for k >= 3");
  const auto [i, j] = detail::pick_degree_defect_pair(report.degrees);
  report.chosen_pair = {i, j};

  const SphereSelfMap fij = restrict_pair(rule, i, j);
  AntipodeSearchConfig antipode_cfg = cfg.antipode;
  antipode_cfg.seed = cfg.seed ^ antipode_cfg.seed;
  const AntipodeSearchResult found = find_antipodal_point(fij, antipode_cfg);
  if (!found.point) {
    throw AntipodeSearchStalled(
        "no antipodal point of " + fij.provenance + " reached tolerance " +
            std::to_string(antipode_cfg.tol) + "; best residual " +
            std::to_string(found.best_residual),
        found.best_residual);
  }
  report.antipodal_point = found.point;
  report.antipode_residual = found.best_residual;

  const SpherePoint y =
      detail::pick_partner_preference(*found.point, rule.dim_n(), cfg.witness_net_size, cfg.seed);
  report.certificate = twin_witness_from_antipode(rule, i, j, *found.point, y);
  return finish(AuditStatus::proved_with_witness);
}

/// Theorem audit for the Participation Condition: the same degree pipeline
/// on f^{(k+1)}, with the witness stage replaced by the joiner construction.
inline AuditReport run_noshow_audit(const RuleFamily& family, int k, const AuditConfig& cfg = {}) {
  if (k < 2) throw BadK("participation audit requires k >= 2 so that k + 1 >= 3");
  if (family.dim_n != 1 && family.dim_n != 2) {
    throw UnsupportedDimension("participation audit requires dim_n in {1, 2}");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const AggregationRule rule_hi = family.at(k + 1);
  AuditReport report;
  report.subject = family.name;
  report.mode = ConditionId::participation;
  report.degrees = coordinate_degrees(rule_hi, cfg.degree);

  const auto finish = [&](AuditStatus status) {
    report.status = status;
    report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
    return report;
  };

  if (!report.degrees.complete()) return finish(AuditStatus::degrees_unavailable);
  if (!report.degrees.additivity_ok) return finish(AuditStatus::rule_partial_detected);

  const DegreeSystemVerdict verdict = solve_twin_degree_system(k + 1);
  if (!verdict.unsat) throw Error("internal: degree system satisfiable for k + 1 >= 3");
  const auto [i, j] = detail::pick_degree_defect_pair(report.degrees);
  report.chosen_pair = {i, j};

  const SphereSelfMap fij = restrict_pair(rule_hi, i, j);
  AntipodeSearchConfig antipode_cfg = cfg.antipode;
  antipode_cfg.seed = cfg.seed ^ antipode_cfg.seed;
  const AntipodeSearchResult found = find_antipodal_point(fij, antipode_cfg);
  if (!found.point) {
    throw AntipodeSearchStalled(
        "no antipodal point of " + fij.provenance + " reached tolerance " +
            std::to_string(antipode_cfg.tol) + "; best residual " +
            std::to_string(found.best_residual),
        found.best_residual);
  }
  report.antipodal_point = found.point;
  report.antipode_residual = found.best_residual;

  report.certificate = noshow_witness_from_antipode(family, k, i, j, *found.point);
  return finish(AuditStatus::proved_with_witness);
}

}  // namespace topovote
