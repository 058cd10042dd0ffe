#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topovote/rules.hpp"

namespace topovote {

enum class ConditionId { twin, participation };
enum class ViolationKind { weak, strictness };
enum class CheckStatus { holds, weak_violation, strictness_violation };

inline std::string to_string(ConditionId c) {
  return c == ConditionId::twin ? "twin" : "participation";
}
inline std::string to_string(ViolationKind k) {
  return k == ViolationKind::weak ? "weak" : "strictness";
}

/// Result of a single condition check at a concrete profile.
struct CheckOutcome {
  CheckStatus status = CheckStatus::holds;
  double d_before = 0.0;
  double d_after = 0.0;
  double margin = 0.0;  // d_after - d_before
};

/// A concrete, re-verifiable paradox witness.  `before_profile` is the
/// election as it stood; `after_profile` is the election after the move
/// (twin: the partner adopted the focal voter's preference; participation:
/// the focal voter joined).
struct ViolationCertificate {
  ConditionId condition = ConditionId::twin;
  ViolationKind kind = ViolationKind::weak;
  std::string rule_name;
  Profile before_profile;
  Profile after_profile;
  int focal_voter = 0;
  std::optional<int> partner_voter;
  double d_before = 0.0;
  double d_after = 0.0;
  double margin = 0.0;
  bool verified = false;
};

namespace detail {

/// Shared classification: a move may not increase the distance, and must
/// strictly decrease it whenever the focal preference differs from the
/// before-outcome.  All comparisons at the uniform 1e-9 tolerance.
inline CheckOutcome classify_move(double d_before, double d_after,
                                  double focal_to_outcome_before) {
  CheckOutcome out;
  out.d_before = d_before;
  out.d_after = d_after;
  out.margin = d_after - d_before;
  if (out.margin > kEqualTol) {
    out.status = CheckStatus::weak_violation;
  } else if (out.margin >= -kEqualTol && focal_to_outcome_before > kEqualTol) {
    out.status = CheckStatus::strictness_violation;
  } else {
    out.status = CheckStatus::holds;
  }
  return out;
}

}  // namespace detail

/// Twin Condition check: voter j adopts voter i's preference; the outcome
/// may not move away from x_i, and must move strictly closer when x_i was
/// not already the outcome.
inline CheckOutcome check_twin(const AggregationRule& rule, const Profile& p, int i, int j) {
  if (i == j) throw TwinPreconditionViolated("twin check needs two distinct voters");
  const SpherePoint& xi = p.voter(i);
  const SpherePoint& xj = p.voter(j);
  if (geodesic_distance(xi, xj) <= kEqualTol) {
    throw TwinPreconditionViolated("twin check requires x_i != x_j");
  }
  const SpherePoint out_before = rule.evaluate(p);
  const SpherePoint out_after = rule.evaluate(p.with_voter(j, xi));
  return detail::classify_move(geodesic_distance(out_before, xi),
                               geodesic_distance(out_after, xi),
                               geodesic_distance(xi, out_before));
}

/// Participation Condition check on a (k+1)-voter profile: compares the
/// outcome with voter i present against the outcome when voter i abstains.
inline CheckOutcome check_participation(const RuleFamily& family, const Profile& p, int i) {
  const int k_plus_1 = p.voters();
  if (k_plus_1 < 3) throw BadK("participation check needs at least 3 voters present");
  const SpherePoint& xi = p.voter(i);
  const Profile without = delete_voter(p, i);
  SpherePoint out_without = [&] {
    try {
      return family.at(k_plus_1 - 1).evaluate(without);
    } catch (const UndefinedAtProfile& e) {
      throw UndefinedAtProfile("abstention outcome undefined: " + std::string(e.what()));
    }
  }();
  SpherePoint out_with = [&] {
    try {
      return family.at(k_plus_1).evaluate(p);
    } catch (const UndefinedAtProfile& e) {
      throw UndefinedAtProfile("participation outcome undefined: " + std::string(e.what()));
    }
  }();
  return detail::classify_move(geodesic_distance(out_without, xi),
                               geodesic_distance(out_with, xi),
                               geodesic_distance(xi, out_without));
}

/// An outsider who agrees with the outcome should not change it.
struct OutsiderOutcome {
  bool holds = false;
  double deviation = 0.0;
};

inline OutsiderOutcome check_outsider_stability(const RuleFamily& family, const Profile& p,
                                                int i) {
  const SpherePoint y = family.at(p.voters()).evaluate(p);
  const Profile q = insert_voter(p, i, y);
  const double deviation = geodesic_distance(family.at(p.voters() + 1).evaluate(q), y);
  return {deviation <= kEqualTol, deviation};
}

// ---- certificate verification -----------------------------------------

inline bool verify_twin_certificate(const ViolationCertificate& c, const AggregationRule& rule) {
  if (c.condition != ConditionId::twin || !c.partner_voter) return false;
  const int i = c.focal_voter;
  const int j = *c.partner_voter;
  if (i < 1 || i > c.before_profile.voters() || j < 1 || j > c.before_profile.voters() || i == j) {
    return false;
  }
  const SpherePoint& xi = c.before_profile.voter(i);
  if (geodesic_distance(xi, c.before_profile.voter(j)) <= kEqualTol) return false;
  if (!(c.after_profile == c.before_profile.with_voter(j, xi))) return false;
  try {
    const SpherePoint out_before = rule.evaluate(c.before_profile);
    const SpherePoint out_after = rule.evaluate(c.after_profile);
    const double db = geodesic_distance(out_before, xi);
    const double da = geodesic_distance(out_after, xi);
    if (std::abs(db - c.d_before) > kEqualTol) return false;
    if (std::abs(da - c.d_after) > kEqualTol) return false;
    if (std::abs(c.margin - (c.d_after - c.d_before)) > kEqualTol) return false;
    const CheckOutcome re = detail::classify_move(db, da, geodesic_distance(xi, out_before));
    if (c.kind == ViolationKind::weak) return re.status == CheckStatus::weak_violation;
    return re.status == CheckStatus::strictness_violation;
  } catch (const Error&) {
    return false;
  }
}

inline bool verify_participation_certificate(const ViolationCertificate& c,
                                             const RuleFamily& family) {
  if (c.condition != ConditionId::participation) return false;
  const int i = c.focal_voter;
  if (i < 1 || i > c.after_profile.voters()) return false;
  if (c.after_profile.voters() != c.before_profile.voters() + 1) return false;
  if (!(c.before_profile == delete_voter(c.after_profile, i))) return false;
  const SpherePoint& xi = c.after_profile.voter(i);
  try {
    const SpherePoint out_without = family.at(c.before_profile.voters()).evaluate(c.before_profile);
    const SpherePoint out_with = family.at(c.after_profile.voters()).evaluate(c.after_profile);
    const double db = geodesic_distance(out_without, xi);
    const double da = geodesic_distance(out_with, xi);
    if (std::abs(db - c.d_before) > kEqualTol) return false;
    if (std::abs(da - c.d_after) > kEqualTol) return false;
    if (std::abs(c.margin - (c.d_after - c.d_before)) > kEqualTol) return false;
    const CheckOutcome re = detail::classify_move(db, da, geodesic_distance(xi, out_without));
    if (c.kind == ViolationKind::weak) return re.status == CheckStatus::weak_violation;
    return re.status == CheckStatus::strictness_violation;
  } catch (const Error&) {
    return false;
  }
}

// ---- Nowhere Anti-Unanimity scans ---------------------------------------

/// Result of scanning a self-map for near-antipodal behavior over a net.
struct NauScanResult {
  std::string map_provenance;
  SpherePoint worst_point;
  double gap = 0.0;  // min over the net of d(g(x), -x)
  NetKind net_kind = NetKind::uniform_random;
  int net_size = 0;
  double net_mesh = kPi;
  std::uint64_t net_seed = 0;
  bool certified = false;
  std::optional<double> certificate_slack;
};

/// Scan g over the net.  With a Lipschitz bound L the scan is a proof:
/// gap > (1 + L) * mesh forces g(x) != -x everywhere, since moving from the
/// nearest net point changes d(g(x), -x) by at most (1 + L) * mesh.
inline NauScanResult scan_nau(const SphereSelfMap& g, const SampleNet& net,
                              std::optional<double> lipschitz = std::nullopt) {
  if (net.points.empty()) throw BadParams("scan_nau needs a nonempty net");
  if (net.points.front().dim_n() != g.dim_n) {
    throw DimensionMismatch("net and map live on different spheres");
  }
  if (lipschitz && *lipschitz < 0.0) throw BadParams("Lipschitz bound must be >= 0");
  std::vector<std::vector<double>> undefined_at;
  double gap = std::numeric_limits<double>::infinity();
  const SpherePoint* worst = nullptr;
  for (const auto& x : net.points) {
    try {
      const SpherePoint gx = g(x);
      const double d = geodesic_distance(gx, antipode(x));
      if (d < gap) {
        gap = d;
        worst = &x;
      }
    } catch (const UndefinedAtPoint&) {
      undefined_at.push_back(x.coords());
    }
  }
  if (!undefined_at.empty()) {
    const std::size_t hits = undefined_at.size();
    throw UndefinedAtPoint("map undefined at " + std::to_string(hits) + " of " +
                               std::to_string(net.points.size()) + " net points",
                           std::move(undefined_at));
  }
  NauScanResult result{g.provenance, *worst,  gap,   net.kind, net.size,
                       net.mesh,     net.seed, false, std::nullopt};
  if (lipschitz) {
    const double slack = gap - (1.0 + *lipschitz) * net.mesh;
    result.certificate_slack = slack;
    result.certified = slack > 0.0;
  }
  return result;
}

// ---- antipodal point search ---------------------------------------------

/// Residual 0.5 * |g(x) + x|^2: zero exactly when g(x) = -x.  The squared
/// chord form stays accurate down to machine scale where 1 + g(x).x cancels.
inline double antipodality_residual(const SphereSelfMap& g, const SpherePoint& x) {
  const SpherePoint gx = g(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.ambient_dim(); ++i) {
    const double t = gx[i] + x[i];
    s += t * t;
  }
  return 0.5 * s;
}

struct AntipodeSearchConfig {
  int multistarts = 16;
  int max_iter = 200;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct AntipodeSearchResult {
  std::optional<SpherePoint> point;  // set iff best_residual <= tol
  double best_residual = std::numeric_limits<double>::infinity();
  std::optional<SpherePoint> best_point;
};

namespace detail {

inline std::pair<SpherePoint, double> descend_antipodality(const SphereSelfMap& g,
                                                           SpherePoint x, int max_iter) {
  const double h = 1e-6;
  auto phi = [&](const SpherePoint& p) -> double {
    try {
      return antipodality_residual(g, p);
    } catch (const UndefinedAtPoint&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double fx = phi(x);
  if (!std::isfinite(fx)) return {x, fx};
  for (int it = 0; it < max_iter && fx > 1e-30; ++it) {
    const auto basis = tangent_basis(x);
    std::vector<double> grad(basis.size(), 0.0);
    double grad_norm2 = 0.0;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const double fp = phi(exp_map(x, scaled(basis[b], h)));
      const double fm = phi(exp_map(x, scaled(basis[b], -h)));
      if (!std::isfinite(fp) || !std::isfinite(fm)) return {x, fx};
      grad[b] = (fp - fm) / (2.0 * h);
      grad_norm2 += grad[b] * grad[b];
    }
    const double grad_norm = std::sqrt(grad_norm2);
    if (grad_norm < 1e-18) break;
    std::vector<double> dir(x.ambient_dim(), 0.0);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] += grad[b] * basis[b][i];
    }
    // Fresh backtracking each iteration.  The 0.25 sufficient-decrease
    // constant rejects overshooting steps that an Armijo-1e-4 rule would
    // accept, which on the cosine-shaped residuals of restricted rules
    // keeps the accepted step near the Newton step.
    bool improved = false;
    for (double s = 1.0; s * grad_norm > 1e-18; s *= 0.5) {
      const SpherePoint cand = exp_map(x, scaled(dir, -s));
      const double fc = phi(cand);
      if (fc < fx - 0.25 * s * grad_norm2) {
        x = cand;
        fx = fc;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {x, fx};
}

}  // namespace detail

/// Multistart minimization of the antipodality residual.  Returns a point
/// with residual <= tol when one is found; partial maps simply stall the
/// affected starts.
inline AntipodeSearchResult find_antipodal_point(const SphereSelfMap& g,
                                                 const AntipodeSearchConfig& cfg = {}) {
  if (cfg.multistarts < 1) throw BadParams("need at least one start");
  std::mt19937_64 rng(cfg.seed);
  AntipodeSearchResult result;
  for (int s = 0; s < cfg.multistarts; ++s) {
    const SpherePoint start = random_sphere_point(rng, g.dim_n);
    auto [x, fx] = detail::descend_antipodality(g, start, cfg.max_iter);
    if (fx < result.best_residual) {
      result.best_residual = fx;
      result.best_point = x;
    }
    if (result.best_residual <= 1e-28) break;
  }
  if (result.best_residual <= cfg.tol) result.point = result.best_point;
  return result;
}

// ---- witnesses built from antipodal points -------------------------------

/// Turn an antipodal point of f_{i,j} into a twin violation: the pairing
/// move lands the outcome at -x0, distance pi from the focal preference, so
/// the move cannot have strictly improved anything.
inline ViolationCertificate twin_witness_from_antipode(const AggregationRule& rule, int i, int j,
                                                       const SpherePoint& x0,
                                                       const SpherePoint& y) {
  if (geodesic_distance(x0, y) <= kEqualTol) {
    throw BadParams("the partner's previous preference y must differ from x0");
  }
  const SphereSelfMap fij = restrict_pair(rule, i, j);
  const SpherePoint image = fij(x0);
  const double residual = geodesic_distance(image, antipode(x0));
  if (residual > kAntipodalWitnessTol) {
    throw NotAntipodal("f_{i,j}(x0) is at geodesic distance " + std::to_string(residual) +
                       " from -x0; witness construction needs <= 1e-6");
  }
  const Profile after = twin_embedding(rule.k(), i, j, x0);
  const Profile before = after.with_voter(j, y);
  const SpherePoint out_before = rule.evaluate(before);
  const double d_before = geodesic_distance(out_before, x0);
  const double d_after = geodesic_distance(rule.evaluate(after), x0);
  // The focal preference is x0 itself, so the strict clause binds exactly
  // when the before-outcome is not x0, i.e. d_before > tol.
  const CheckOutcome out = detail::classify_move(d_before, d_after, d_before);
  if (out.status == CheckStatus::holds) {
    throw NotAntipodal("antipodal image too loose to force a violation at this profile");
  }
  ViolationCertificate cert{
      ConditionId::twin,
      out.status == CheckStatus::weak_violation ? ViolationKind::weak
                                                : ViolationKind::strictness,
      rule.name(),
      before,
      after,
      i,
      j,
      d_before,
      d_after,
      d_after - d_before,
      false};
  if (!verify_twin_certificate(cert, rule)) {
    throw Error("internal: twin witness failed its own re-verification");
  }
  cert.verified = true;
  return cert;
}

/// Turn an antipodal point of f^{(k+1)}_{i,j} into a participation violation:
/// joining with preference x0 lands the outcome at -x0, distance pi away.
/// The joiner is voter j; voter i already held x0.
inline ViolationCertificate noshow_witness_from_antipode(const RuleFamily& family, int k, int i,
                                                         int j, const SpherePoint& x0) {
  if (k < 2) throw BadK("participation witnesses need k >= 2");
  const AggregationRule rule_k1 = family.at(k + 1);
  const SphereSelfMap fij = restrict_pair(rule_k1, i, j);
  const SpherePoint image = fij(x0);
  const double residual = geodesic_distance(image, antipode(x0));
  if (residual > kAntipodalWitnessTol) {
    throw NotAntipodal("f^{(k+1)}_{i,j}(x0) is at geodesic distance " + std::to_string(residual) +
                       " from -x0; witness construction needs <= 1e-6");
  }
  const Profile after = twin_embedding(k + 1, i, j, x0);
  const Profile before = delete_voter(after, j);
  const SpherePoint out_before = family.at(k).evaluate(before);
  const double d_before = geodesic_distance(out_before, x0);
  const double d_after = geodesic_distance(rule_k1.evaluate(after), x0);
  const CheckOutcome out = detail::classify_move(d_before, d_after, d_before);
  if (out.status == CheckStatus::holds) {
    throw NotAntipodal("antipodal image too loose to force a violation at this profile");
  }
  ViolationCertificate cert{
      ConditionId::participation,
      out.status == CheckStatus::weak_violation ? ViolationKind::weak
                                                : ViolationKind::strictness,
      family.name,
      before,
      after,
      j,
      i,
      d_before,
      d_after,
      d_after - d_before,
      false};
  if (!verify_participation_certificate(cert, family)) {
    throw Error("internal: participation witness failed its own re-verification");
  }
  cert.verified = true;
  return cert;
}

// ---- violation searches ---------------------------------------------------

struct SearchConfig {
  int net_size = 16;
  int refine_steps = 32;
  int random_restarts = 64;
  std::uint64_t seed = 0;
};

struct SearchResult {
  std::optional<ViolationCertificate> certificate;
  long checks = 0;
  long candidates = 0;
  long singular_skipped = 0;
};

namespace detail {

inline bool profile_lex_less(const Profile& a, const Profile& b) {
  const auto& pa = a.points();
  const auto& pb = b.points();
  for (std::size_t v = 0; v < pa.size() && v < pb.size(); ++v) {
    const auto& ca = pa[v].coords();
    const auto& cb = pb[v].coords();
    for (std::size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
      if (ca[i] != cb[i]) return ca[i] < cb[i];
    }
  }
  return pa.size() < pb.size();
}

struct SearchCandidate {
  Profile profile;
  int i = 0;  // twin: focal voter; participation: focal (joining) voter
  int j = 0;  // twin: partner voter; participation: unused (0)
  CheckOutcome outcome;
};

/// Deterministic preference: larger margin first, then lexicographically
/// smaller profile, then smaller indices.  Independent of discovery order.
inline bool candidate_better(const SearchCandidate& a, const SearchCandidate& b) {
  if (a.outcome.margin != b.outcome.margin) return a.outcome.margin > b.outcome.margin;
  if (profile_lex_less(a.profile, b.profile)) return true;
  if (profile_lex_less(b.profile, a.profile)) return false;
  return std::pair(a.i, a.j) < std::pair(b.i, b.j);
}

/// Profiles too close to a partial rule's singular set are excluded from
/// the search so evaluation noise cannot masquerade as a paradox.
inline constexpr double kSingularExclusion = 1e-6;

template <typename CheckFn>
inline std::optional<CheckOutcome> guarded(const CheckFn& check, long& checks,
                                           long& singular_skipped) {
  ++checks;
  try {
    return check();
  } catch (const UndefinedAtProfile&) {
    ++singular_skipped;
    return std::nullopt;
  } catch (const TwinPreconditionViolated&) {
    return std::nullopt;
  }
}

/// Hill-climb a candidate's margin by moving voters along tangent
/// directions, halving the geodesic step down to the 1e-6 floor.
template <typename ObjectiveFn>
inline Profile refine_profile(Profile p, double initial_step, int refine_steps,
                              const ObjectiveFn& objective) {
  double best = objective(p);
  double step = initial_step;
  for (int round = 0; round < refine_steps && step >= 1e-6; ++round) {
    bool improved = false;
    for (int v = 1; v <= p.voters(); ++v) {
      const auto basis = tangent_basis(p.voter(v));
      for (const auto& dir : basis) {
        for (double sign : {1.0, -1.0}) {
          Profile trial = p.with_voter(v, exp_map(p.voter(v), scaled(dir, sign * step)));
          const double m = objective(trial);
          if (m > best + 1e-15) {
            p = std::move(trial);
            best = m;
            improved = true;
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return p;
}

}  // namespace detail

/// Grid-plus-refinement search for twin violations.  Explores the slices the
/// theory points at first (everyone but two voters at e1), then random
/// profiles, then polishes the best candidate by coordinate descent.
inline SearchResult search_twin_violation(const AggregationRule& rule,
                                          const SearchConfig& cfg = {}) {
  if (rule.k() < 2) throw BadK("twin search needs k >= 2");
  SearchResult result;
  const int k = rule.k();
  const SampleNet net = covering_net(rule.dim_n(), cfg.net_size, cfg.seed);

  std::optional<detail::SearchCandidate> best;
  auto consider = [&](const Profile& p, int i, int j) {
    if (auto gauge = rule.singular_gauge(p); gauge && *gauge < detail::kSingularExclusion) {
      ++result.singular_skipped;
      return;
    }
    auto outcome = detail::guarded([&] { return check_twin(rule, p, i, j); }, result.checks,
                                   result.singular_skipped);
    if (!outcome || outcome->status == CheckStatus::holds) return;
    ++result.candidates;
    detail::SearchCandidate cand{p, i, j, *outcome};
    if (!best || detail::candidate_better(cand, *best)) best = std::move(cand);
  };

  // Phase 1: two-voter slices around the basepoint.
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (i == j) continue;
      for (const auto& x : net.points) {
        for (const auto& y : net.points) {
          if (geodesic_distance(x, y) <= kEqualTol) continue;
          Profile p = twin_embedding(k, i, j, x).with_voter(j, y);
          consider(p, i, j);
        }
      }
    }
  }
  // Phase 2: random restarts over full profiles.
  std::mt19937_64 rng(cfg.seed);
  for (int r = 0; r < cfg.random_restarts; ++r) {
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<std::size_t>(k));
    for (int v = 0; v < k; ++v) pts.push_back(random_sphere_point(rng, rule.dim_n()));
    const Profile p(std::move(pts));
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) {
        if (i != j) consider(p, i, j);
      }
    }
  }
  if (!best) return result;

  // Phase 3: polish the winning candidate.
  const int bi = best->i, bj = best->j;
  auto objective = [&](const Profile& p) -> double {
    if (auto gauge = rule.singular_gauge(p); gauge && *gauge < detail::kSingularExclusion) {
      return -std::numeric_limits<double>::infinity();
    }
    try {
      const CheckOutcome out = check_twin(rule, p, bi, bj);
      if (out.status == CheckStatus::holds) return -std::numeric_limits<double>::infinity();
      return out.margin;
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const Profile refined =
      detail::refine_profile(best->profile, net.mesh, cfg.refine_steps, objective);
  const CheckOutcome outcome = check_twin(rule, refined, bi, bj);

  ViolationCertificate cert{
      ConditionId::twin,
      outcome.status == CheckStatus::weak_violation ? ViolationKind::weak
                                                    : ViolationKind::strictness,
      rule.name(),
      refined,
      refined.with_voter(bj, refined.voter(bi)),
      bi,
      bj,
      outcome.d_before,
      outcome.d_after,
      outcome.margin,
      false};
  if (!verify_twin_certificate(cert, rule)) {
    throw Error("internal: searched twin certificate failed re-verification");
  }
  cert.verified = true;
  result.certificate = std::move(cert);
  return result;
}

/// Same strategy over (k+1)-voter profiles and focal joiners.
inline SearchResult search_noshow_violation(const RuleFamily& family, int k,
                                            const SearchConfig& cfg = {}) {
  if (k < 2) throw BadK("participation search needs k >= 2");
  SearchResult result;
  const int kp1 = k + 1;
  const SampleNet net = covering_net(family.dim_n, cfg.net_size, cfg.seed);
  const AggregationRule rule_lo = family.at(k);
  const AggregationRule rule_hi = family.at(kp1);

  std::optional<detail::SearchCandidate> best;
  auto consider = [&](const Profile& q, int focal) {
    if (auto g = rule_hi.singular_gauge(q); g && *g < detail::kSingularExclusion) {
      ++result.singular_skipped;
      return;
    }
    if (auto g = rule_lo.singular_gauge(delete_voter(q, focal));
        g && *g < detail::kSingularExclusion) {
      ++result.singular_skipped;
      return;
    }
    auto outcome = detail::guarded([&] { return check_participation(family, q, focal); },
                                   result.checks, result.singular_skipped);
    if (!outcome || outcome->status == CheckStatus::holds) return;
    ++result.candidates;
    detail::SearchCandidate cand{q, focal, 0, *outcome};
    if (!best || detail::candidate_better(cand, *best)) best = std::move(cand);
  };

  for (int a = 1; a <= kp1; ++a) {
    for (int b = a + 1; b <= kp1; ++b) {
      for (const auto& x : net.points) {
        for (const auto& y : net.points) {
          Profile q = coordinate_embedding(kp1, a, x).with_voter(b, y);
          for (int focal = 1; focal <= kp1; ++focal) consider(q, focal);
        }
      }
    }
  }
  std::mt19937_64 rng(cfg.seed);
  for (int r = 0; r < cfg.random_restarts; ++r) {
    std::vector<SpherePoint> pts;
    pts.reserve(static_cast<std::size_t>(kp1));
    for (int v = 0; v < kp1; ++v) pts.push_back(random_sphere_point(rng, family.dim_n));
    const Profile q(std::move(pts));
    for (int focal = 1; focal <= kp1; ++focal) consider(q, focal);
  }
  if (!best) return result;

  const int focal = best->i;
  auto objective = [&](const Profile& q) -> double {
    if (auto g = rule_hi.singular_gauge(q); g && *g < detail::kSingularExclusion) {
      return -std::numeric_limits<double>::infinity();
    }
    try {
      if (auto g = rule_lo.singular_gauge(delete_voter(q, focal));
          g && *g < detail::kSingularExclusion) {
        return -std::numeric_limits<double>::infinity();
      }
      const CheckOutcome out = check_participation(family, q, focal);
      if (out.status == CheckStatus::holds) return -std::numeric_limits<double>::infinity();
      return out.margin;
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const Profile refined =
      detail::refine_profile(best->profile, net.mesh, cfg.refine_steps, objective);
  const CheckOutcome outcome = check_participation(family, refined, focal);

  ViolationCertificate cert{
      ConditionId::participation,
      outcome.status == CheckStatus::weak_violation ? ViolationKind::weak
                                                    : ViolationKind::strictness,
      family.name,
      delete_voter(refined, focal),
      refined,
      focal,
      std::nullopt,
      outcome.d_before,
      outcome.d_after,
      outcome.margin,
      false};
  if (!verify_participation_certificate(cert, family)) {
    throw Error("internal: searched participation certificate failed re-verification");
  }
  cert.verified = true;
  result.certificate = std::move(cert);
  return result;
}

}  // namespace topovote
