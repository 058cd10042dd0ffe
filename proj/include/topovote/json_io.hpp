#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topovote/audit.hpp"
#include "topovote/conditions.hpp"
#include "topovote/degree.hpp"
#include "topovote/rules.hpp"
#include "topovote/sphere.hpp"

namespace topovote {

using nlohmann::json;

// Angles are serialized in radians with a redundant degrees field so the
// reports read naturally; parsers only ever consume the radians.
inline json angle_json(double rad) {
  return json{{"rad", rad}, {"deg", rad * (180.0 / kPi)}};
}

inline double angle_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  return j.at("rad").get<double>();
}

// ---- points and profiles ---------------------------------------------------

inline json to_json(const SpherePoint& p) { return json(p.coords()); }

inline SpherePoint sphere_point_from_json(const json& j) {
  return SpherePoint(j.get<std::vector<double>>());
}

inline json to_json(const Profile& p) {
  json arr = json::array();
  for (const auto& pt : p.points()) arr.push_back(to_json(pt));
  return arr;
}

inline Profile profile_from_json(const json& j) {
  std::vector<SpherePoint> pts;
  for (const auto& e : j) pts.push_back(sphere_point_from_json(e));
  return Profile(std::move(pts));
}

// ---- enums ------------------------------------------------------------------

inline ConditionId condition_from_string(const std::string& s) {
  if (s == "twin") return ConditionId::twin;
  if (s == "participation") return ConditionId::participation;
  throw BadParams("unknown condition '" + s + "'");
}

inline ViolationKind kind_from_string(const std::string& s) {
  if (s == "weak") return ViolationKind::weak;
  if (s == "strictness") return ViolationKind::strictness;
  throw BadParams("unknown violation kind '" + s + "'");
}

inline NetKind net_kind_from_string(const std::string& s) {
  if (s == "circle_grid") return NetKind::circle_grid;
  if (s == "fibonacci_s2") return NetKind::fibonacci_s2;
  if (s == "uniform_random") return NetKind::uniform_random;
  throw BadParams("unknown net kind '" + s + "'");
}

inline AuditStatus audit_status_from_string(const std::string& s) {
  if (s == "proved_with_witness") return AuditStatus::proved_with_witness;
  if (s == "degrees_unavailable") return AuditStatus::degrees_unavailable;
  if (s == "rule_partial_detected") return AuditStatus::rule_partial_detected;
  throw BadParams("unknown audit status '" + s + "'");
}

// ---- certificates ------------------------------------------------------------

inline json to_json(const ViolationCertificate& c) {
  json j;
  j["condition"] = to_string(c.condition);
  j["kind"] = to_string(c.kind);
  j["rule_name"] = c.rule_name;
  j["before_profile"] = to_json(c.before_profile);
  j["after_profile"] = to_json(c.after_profile);
  j["focal_voter"] = c.focal_voter;
  j["partner_voter"] = c.partner_voter ? json(*c.partner_voter) : json(nullptr);
  j["d_before"] = angle_json(c.d_before);
  j["d_after"] = angle_json(c.d_after);
  j["margin"] = angle_json(c.margin);
  j["verified"] = c.verified;
  return j;
}

inline ViolationCertificate certificate_from_json(const json& j) {
  ViolationCertificate c{condition_from_string(j.at("condition").get<std::string>()),
                         kind_from_string(j.at("kind").get<std::string>()),
                         j.at("rule_name").get<std::string>(),
                         profile_from_json(j.at("before_profile")),
                         profile_from_json(j.at("after_profile")),
                         j.at("focal_voter").get<int>(),
                         std::nullopt,
                         angle_from_json(j.at("d_before")),
                         angle_from_json(j.at("d_after")),
                         angle_from_json(j.at("margin")),
                         j.at("verified").get<bool>()};
  if (!j.at("partner_voter").is_null()) c.partner_voter = j.at("partner_voter").get<int>();
  return c;
}

// ---- NAU scans ----------------------------------------------------------------

inline json to_json(const NauScanResult& r) {
  json j;
  j["map"] = r.map_provenance;
  j["worst_point"] = to_json(r.worst_point);
  j["gap"] = angle_json(r.gap);
  j["net"] = json{{"kind", to_string(r.net_kind)},
                  {"size", r.net_size},
                  {"mesh", r.net_mesh},
                  {"seed", r.net_seed}};
  j["certified"] = r.certified;
  j["certificate_slack"] = r.certificate_slack ? json(*r.certificate_slack) : json(nullptr);
  return j;
}

inline NauScanResult nau_scan_from_json(const json& j) {
  NauScanResult r{j.at("map").get<std::string>(),
                  sphere_point_from_json(j.at("worst_point")),
                  angle_from_json(j.at("gap")),
                  net_kind_from_string(j.at("net").at("kind").get<std::string>()),
                  j.at("net").at("size").get<int>(),
                  j.at("net").at("mesh").get<double>(),
                  j.at("net").at("seed").get<std::uint64_t>(),
                  j.at("certified").get<bool>(),
                  std::nullopt};
  if (!j.at("certificate_slack").is_null()) {
    r.certificate_slack = j.at("certificate_slack").get<double>();
  }
  return r;
}

// ---- degrees -------------------------------------------------------------------

inline json to_json(const DegreeResult& r) {
  return json{{"value", r.value},
              {"method", to_string(r.method)},
              {"samples_used", r.samples_used},
              {"refinement_depth", r.refinement_depth},
              {"residual", r.residual}};
}

inline json to_json(const DegreeReport& r) {
  json d = json::array();
  for (const auto& e : r.d) d.push_back(e ? json(*e) : json(nullptr));
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(json{{"i", p.i}, {"j", p.j}, {"deg", p.deg ? json(*p.deg) : json(nullptr)}});
  }
  json failures = json::array();
  for (const auto& [i, j] : r.failures) failures.push_back(json::array({i, j}));
  return json{{"rule", r.rule_name},
              {"k", r.k},
              {"dim_n", r.dim_n},
              {"d", d},
              {"D", pairs},
              {"additivity_ok", r.additivity_ok},
              {"failures", failures},
              {"diagnostics", json{{"notes", r.diagnostics}}}};
}

inline DegreeReport degree_report_from_json(const json& j) {
  DegreeReport r;
  r.rule_name = j.at("rule").get<std::string>();
  r.k = j.at("k").get<int>();
  r.dim_n = j.at("dim_n").get<int>();
  for (const auto& e : j.at("d")) {
    r.d.push_back(e.is_null() ? std::optional<int>{} : std::optional<int>(e.get<int>()));
  }
  for (const auto& p : j.at("D")) {
    PairDegree entry{p.at("i").get<int>(), p.at("j").get<int>(), std::nullopt};
    if (!p.at("deg").is_null()) entry.deg = p.at("deg").get<int>();
    r.pairs.push_back(entry);
  }
  r.additivity_ok = j.at("additivity_ok").get<bool>();
  for (const auto& f : j.at("failures")) r.failures.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
  for (const auto& n : j.at("diagnostics").at("notes")) r.diagnostics.push_back(n.get<std::string>());
  return r;
}

inline json to_json(const DegreeSystemVerdict& v) {
  json j;
  j["k"] = v.k;
  j["status"] = v.unsat ? "unsat" : "sat";
  j["witness_solution"] = v.unsat ? json(nullptr) : json(v.witness_solution);
  j["refutation_trace"] = v.unsat ? json(v.refutation_trace) : json(nullptr);
  return j;
}

// ---- audits ---------------------------------------------------------------------

inline json to_json(const AuditReport& r) {
  json j;
  j["subject"] = r.subject;
  j["mode"] = r.mode == ConditionId::twin ? "twin" : "noshow";
  j["status"] = to_string(r.status);
  j["degrees"] = to_json(r.degrees);
  j["pair"] = r.chosen_pair ? json::array({r.chosen_pair->first, r.chosen_pair->second})
                            : json(nullptr);
  if (r.antipodal_point) {
    j["antipode"] = json{{"point", to_json(*r.antipodal_point)}, {"residual", r.antipode_residual}};
  } else {
    j["antipode"] = nullptr;
  }
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

inline AuditReport audit_report_from_json(const json& j) {
  AuditReport r;
  r.subject = j.at("subject").get<std::string>();
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "twin") {
    r.mode = ConditionId::twin;
  } else if (mode == "noshow") {
    r.mode = ConditionId::participation;
  } else {
    throw BadParams("unknown audit mode '" + mode + "'");
  }
  r.status = audit_status_from_string(j.at("status").get<std::string>());
  r.degrees = degree_report_from_json(j.at("degrees"));
  if (!j.at("pair").is_null()) {
    r.chosen_pair = {j.at("pair").at(0).get<int>(), j.at("pair").at(1).get<int>()};
  }
  if (!j.at("antipode").is_null()) {
    r.antipodal_point = sphere_point_from_json(j.at("antipode").at("point"));
    r.antipode_residual = j.at("antipode").at("residual").get<double>();
  }
  if (!j.at("certificate").is_null()) r.certificate = certificate_from_json(j.at("certificate"));
  r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
  return r;
}

// ---- searches -------------------------------------------------------------------

inline json to_json(const SearchResult& r) {
  json j;
  j["found"] = r.certificate.has_value();
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  j["checks"] = r.checks;
  j["candidates"] = r.candidates;
  j["singular_skipped"] = r.singular_skipped;
  return j;
}

// ---- rule specification records ---------------------------------------------------

/// Builds RuleParams from the "params" object of a rule specification
/// record: {"name": string, "k": int, "dim_n": int, "params": object}.
inline RuleParams rule_params_from_json(const json& params) {
  RuleParams out;
  if (params.contains("winner")) out.winner = params.at("winner").get<int>();
  if (params.contains("angle")) out.rotation_angle = params.at("angle").get<double>();
  if (params.contains("center")) out.center = sphere_point_from_json(params.at("center"));
  if (params.contains("max_iter")) out.max_iter = params.at("max_iter").get<int>();
  if (params.contains("step_tol")) out.step_tol = params.at("step_tol").get<double>();
  return out;
}

inline AggregationRule rule_from_spec(const json& spec) {
  return make_builtin(spec.at("name").get<std::string>(), spec.at("k").get<int>(),
                      spec.at("dim_n").get<int>(),
                      rule_params_from_json(spec.value("params", json::object())));
}

inline RuleFamily family_from_spec(const json& spec) {
  return make_builtin_family(spec.at("name").get<std::string>(), spec.at("dim_n").get<int>(),
                             rule_params_from_json(spec.value("params", json::object())));
}

// ---- CSV summaries -----------------------------------------------------------------

namespace detail {

inline std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const DegreeReport& r) {
  std::string out = "rule,alpha_or_pair,degree,additivity_ok\n";
  const std::string ok = r.additivity_ok ? "true" : "false";
  for (std::size_t a = 0; a < r.d.size(); ++a) {
    out += r.rule_name + "," + std::to_string(a + 1) + "," +
           (r.d[a] ? std::to_string(*r.d[a]) : std::string()) + "," + ok + "\n";
  }
  for (const auto& p : r.pairs) {
    out += r.rule_name + "," + std::to_string(p.i) + "-" + std::to_string(p.j) + "," +
           (p.deg ? std::to_string(*p.deg) : std::string()) + "," + ok + "\n";
  }
  return out;
}

inline std::string certificate_csv_header() {
  return "rule,condition,kind,focal_voter,partner_voter,d_before,d_after,margin,verified\n";
}

inline std::string to_csv_row(const ViolationCertificate& c) {
  return c.rule_name + "," + to_string(c.condition) + "," + to_string(c.kind) + "," +
         std::to_string(c.focal_voter) + "," +
         (c.partner_voter ? std::to_string(*c.partner_voter) : std::string()) + "," +
         detail::csv_double(c.d_before) + "," + detail::csv_double(c.d_after) + "," +
         detail::csv_double(c.margin) + "," + (c.verified ? "true" : "false") + "\n";
}

inline std::string to_csv(const ViolationCertificate& c) {
  return certificate_csv_header() + to_csv_row(c);
}

inline std::string to_csv(const NauScanResult& r) {
  return "map,gap,certified,slack,net_kind,net_size,net_mesh\n" + r.map_provenance + "," +
         detail::csv_double(r.gap) + "," + (r.certified ? "true" : "false") + "," +
         (r.certificate_slack ? detail::csv_double(*r.certificate_slack) : std::string()) + "," +
         to_string(r.net_kind) + "," + std::to_string(r.net_size) + "," +
         detail::csv_double(r.net_mesh) + "\n";
}

inline std::string to_csv(const AuditReport& r) {
  std::string out = to_csv(r.degrees);
  out += "\n";
  if (r.certificate) {
    out += to_csv(*r.certificate);
  } else {
    out += "status\n" + to_string(r.status) + "\n";
  }
  return out;
}

inline std::string to_csv(const SearchResult& r) {
  std::string out = certificate_csv_header();
  if (r.certificate) out += to_csv_row(*r.certificate);
  return out;
}

// ---- atomic report emission -----------------------------------------------------

/// Writes via a sibling temp file plus rename so readers never observe a
/// half-written report.
inline void write_text_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move report into place at '" + path + "'");
  }
}

}  // namespace topovote
