#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topovote/sphere.hpp"

namespace topovote {

/// Ordered list of voter preferences.  Voters are addressed 1-based, matching
/// the usual x_1, ..., x_k notation used in every report.
class Profile {
 public:
  explicit Profile(std::vector<SpherePoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw BadParams("a profile needs at least one voter");
    for (const auto& p : points_) {
      if (p.dim_n() != points_.front().dim_n()) {
        throw DimensionMismatch("all profile points must live on the same sphere");
      }
    }
  }

  int voters() const { return static_cast<int>(points_.size()); }
  int dim_n() const { return points_.front().dim_n(); }

  const SpherePoint& voter(int i) const {
    check_index(i);
    return points_[static_cast<std::size_t>(i) - 1];
  }

  Profile with_voter(int i, SpherePoint p) const {
    check_index(i);
    auto pts = points_;
    pts[static_cast<std::size_t>(i) - 1] = std::move(p);
    return Profile(std::move(pts));
  }

  const std::vector<SpherePoint>& points() const { return points_; }

  bool operator==(const Profile& other) const { return points_ == other.points_; }

 private:
  void check_index(int i) const {
    if (i < 1 || i > voters()) {
      throw IndexOutOfRange("voter index " + std::to_string(i) + " outside 1.." +
                            std::to_string(voters()));
    }
  }
  std::vector<SpherePoint> points_;
};

/// Profile of length k-1 with voter i removed, order preserved.
inline Profile delete_voter(const Profile& p, int i) {
  if (p.voters() < 2) throw IndexOutOfRange("cannot delete the only voter");
  if (i < 1 || i > p.voters()) {
    throw IndexOutOfRange("voter index " + std::to_string(i) + " outside 1.." +
                          std::to_string(p.voters()));
  }
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(p.voters()) - 1);
  for (int v = 1; v <= p.voters(); ++v) {
    if (v != i) pts.push_back(p.voter(v));
  }
  return Profile(std::move(pts));
}

/// Profile of length k+1 with x inserted at position i, order preserved.
inline Profile insert_voter(const Profile& p, int i, const SpherePoint& x) {
  if (i < 1 || i > p.voters() + 1) {
    throw IndexOutOfRange("insertion position " + std::to_string(i) + " outside 1.." +
                          std::to_string(p.voters() + 1));
  }
  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(p.voters()) + 1);
  for (int v = 1; v <= p.voters() + 1; ++v) {
    if (v == i) {
      pts.push_back(x);
    } else {
      pts.push_back(p.voter(v < i ? v : v - 1));
    }
  }
  return Profile(std::move(pts));
}

enum class Totality { total_continuous, partial, total_discontinuous };

inline std::string to_string(Totality t) {
  switch (t) {
    case Totality::total_continuous: return "total_continuous";
    case Totality::partial: return "partial";
    case Totality::total_discontinuous: return "total_discontinuous";
  }
  throw BadParams("unknown totality claim");
}

/// An evaluable map (S^n)^k -> S^n with metadata.  Partial rules signal their
/// singular set by throwing UndefinedAtProfile instead of silently totalizing,
/// which would corrupt every degree computation downstream.
class AggregationRule {
 public:
  AggregationRule(std::string name, int k, int dim_n, Totality totality,
                  std::optional<double> lipschitz_bound,
                  std::function<SpherePoint(const Profile&)> eval,
                  std::function<double(const Profile&)> singular_gauge = {})
      : name_(std::move(name)),
        k_(k),
        dim_n_(dim_n),
        totality_(totality),
        lipschitz_(lipschitz_bound),
        eval_(std::move(eval)),
        gauge_(std::move(singular_gauge)) {
    if (k_ < 1) throw BadParams("a rule needs at least one voter");
    if (dim_n_ < 1) throw UnsupportedDimension("sphere dimension must be >= 1");
    if (!eval_) throw BadParams("rule has no evaluation function");
  }

  const std::string& name() const { return name_; }
  int k() const { return k_; }
  int dim_n() const { return dim_n_; }
  Totality totality_claim() const { return totality_; }
  /// Geodesic-to-geodesic modulus w.r.t. the sup product metric, if known.
  std::optional<double> lipschitz_bound() const { return lipschitz_; }

  SpherePoint evaluate(const Profile& p) const {
    if (p.voters() != k_) {
      throw DimensionMismatch("rule expects " + std::to_string(k_) + " voters, got " +
                              std::to_string(p.voters()));
    }
    if (p.dim_n() != dim_n_) {
      throw DimensionMismatch("rule lives on S^" + std::to_string(dim_n_) +
                              ", profile on S^" + std::to_string(p.dim_n()));
    }
    return eval_(p);
  }

  /// Distance proxy to the singular set for partial rules (larger is safer);
  /// nullopt when the rule has no singular set or no usable gauge.
  std::optional<double> singular_gauge(const Profile& p) const {
    if (!gauge_) return std::nullopt;
    return gauge_(p);
  }

 private:
  std::string name_;
  int k_;
  int dim_n_;
  Totality totality_;
  std::optional<double> lipschitz_;
  std::function<SpherePoint(const Profile&)> eval_;
  std::function<double(const Profile&)> gauge_;
};

/// An evaluable self-map S^n -> S^n, tagged with where it came from.
struct SphereSelfMap {
  std::string provenance = "raw";
  int dim_n = 1;
  std::optional<double> lipschitz;
  std::function<SpherePoint(const SpherePoint&)> fn;

  SpherePoint operator()(const SpherePoint& x) const {
    if (x.dim_n() != dim_n) {
      throw DimensionMismatch("map on S^" + std::to_string(dim_n) + " applied to a point of S^" +
                              std::to_string(x.dim_n()));
    }
    return fn(x);
  }
};

/// Profile with x planted in slots i and j and the basepoint e1 everywhere else.
inline Profile twin_embedding(int k, int i, int j, const SpherePoint& x) {
  if (k < 2) throw BadParams("twin embedding needs k >= 2");
  if (i < 1 || i > k || j < 1 || j > k || i == j) {
    throw IndexOutOfRange("twin slots must be distinct indices in 1.." + std::to_string(k) +
                          ", got (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  std::vector<SpherePoint> pts(static_cast<std::size_t>(k), SpherePoint::basepoint(x.dim_n()));
  pts[static_cast<std::size_t>(i) - 1] = x;
  pts[static_cast<std::size_t>(j) - 1] = x;
  return Profile(std::move(pts));
}

/// Profile with x in slot alpha and the basepoint e1 everywhere else.
inline Profile coordinate_embedding(int k, int alpha, const SpherePoint& x) {
  if (k < 1) throw BadParams("coordinate embedding needs k >= 1");
  if (alpha < 1 || alpha > k) {
    throw IndexOutOfRange("slot " + std::to_string(alpha) + " outside 1.." + std::to_string(k));
  }
  std::vector<SpherePoint> pts(static_cast<std::size_t>(k), SpherePoint::basepoint(x.dim_n()));
  pts[static_cast<std::size_t>(alpha) - 1] = x;
  return Profile(std::move(pts));
}

/// The two-slot restriction x -> f(e1, ..., x, ..., x, ..., e1).
inline SphereSelfMap restrict_pair(const AggregationRule& rule, int i, int j) {
  if (i < 1 || i > rule.k() || j < 1 || j > rule.k() || i == j) {
    throw IndexOutOfRange("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") invalid for k = " + std::to_string(rule.k()));
  }
  SphereSelfMap map;
  map.provenance = "f_{" + std::to_string(i) + "," + std::to_string(j) + "} of " + rule.name();
  map.dim_n = rule.dim_n();
  map.lipschitz = rule.lipschitz_bound();
  map.fn = [rule, i, j](const SpherePoint& x) {
    try {
      return rule.evaluate(twin_embedding(rule.k(), i, j, x));
    } catch (const UndefinedAtProfile& e) {
      throw UndefinedAtPoint(std::string(e.what()), {x.coords()});
    }
  };
  return map;
}

/// The single-slot restriction x -> f(e1, ..., x, ..., e1).
inline SphereSelfMap restrict_coordinate(const AggregationRule& rule, int alpha) {
  if (alpha < 1 || alpha > rule.k()) {
    throw IndexOutOfRange("slot " + std::to_string(alpha) + " outside 1.." +
                          std::to_string(rule.k()));
  }
  SphereSelfMap map;
  map.provenance = "f_{alpha=" + std::to_string(alpha) + "} of " + rule.name();
  map.dim_n = rule.dim_n();
  map.lipschitz = rule.lipschitz_bound();
  map.fn = [rule, alpha](const SpherePoint& x) {
    try {
      return rule.evaluate(coordinate_embedding(rule.k(), alpha, x));
    } catch (const UndefinedAtProfile& e) {
      throw UndefinedAtPoint(std::string(e.what()), {x.coords()});
    }
  };
  return map;
}

/// The unanimity diagonal x -> f(x, x, ..., x).
inline SphereSelfMap diagonal_map(const AggregationRule& rule) {
  SphereSelfMap map;
  map.provenance = "diagonal of " + rule.name();
  map.dim_n = rule.dim_n();
  map.lipschitz = rule.lipschitz_bound();
  map.fn = [rule](const SpherePoint& x) {
    std::vector<SpherePoint> pts(static_cast<std::size_t>(rule.k()), x);
    try {
      return rule.evaluate(Profile(std::move(pts)));
    } catch (const UndefinedAtProfile& e) {
      throw UndefinedAtPoint(std::string(e.what()), {x.coords()});
    }
  };
  return map;
}

// ---- builtin catalog ---------------------------------------------------

/// Parameters for the builtin catalog; fields not used by a rule are ignored.
struct RuleParams {
  int winner = 1;                     // dictator, rotated_dictator
  double rotation_angle = 0.0;        // rotated_dictator
  std::optional<SpherePoint> center;  // constant; defaults to the basepoint e1
  int max_iter = 200;                 // karcher_mean
  double step_tol = 1e-10;            // karcher_mean
};

namespace detail {

inline SpherePoint rotate_in_plane_12(const SpherePoint& x, double angle) {
  auto c = x.coords();
  const double c0 = c[0], c1 = c[1];
  const double ca = std::cos(angle), sa = std::sin(angle);
  c[0] = ca * c0 - sa * c1;
  c[1] = sa * c0 + ca * c1;
  return normalize(c);
}

inline std::vector<double> coordinate_sum(const Profile& p) {
  std::vector<double> sum(static_cast<std::size_t>(p.dim_n()) + 1, 0.0);
  for (const auto& pt : p.points()) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pt[i];
  }
  return sum;
}

inline SpherePoint normalized_sum(const Profile& p) {
  auto sum = coordinate_sum(p);
  try {
    return normalize(sum);
  } catch (const NearZeroVector&) {
    throw UndefinedAtProfile("the coordinate sum of the profile vanishes");
  }
}

/// Riemannian center of mass by fixed-point iteration on the intrinsic mean
/// gradient, started at the normalized coordinate sum.
inline SpherePoint karcher_mean(const Profile& p, int max_iter, double step_tol) {
  const int k = p.voters();
  SpherePoint mean = normalized_sum(p);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> update(mean.ambient_dim(), 0.0);
    for (const auto& pt : p.points()) {
      std::vector<double> v;
      try {
        v = log_map(mean, pt);
      } catch (const AntipodalPair&) {
        throw UndefinedAtProfile("a voter sits at the cut locus of the running mean");
      }
      for (std::size_t i = 0; i < update.size(); ++i) update[i] += v[i];
    }
    for (auto& c : update) c /= k;
    if (detail::norm(update) < step_tol) break;
    mean = exp_map(mean, update);
  }
  // Stationarity is part of the contract: a mean that did not converge is
  // reported as undefined rather than returned as an approximation.
  std::vector<double> residual(mean.ambient_dim(), 0.0);
  for (const auto& pt : p.points()) {
    std::vector<double> v;
    try {
      v = log_map(mean, pt);
    } catch (const AntipodalPair&) {
      throw UndefinedAtProfile("a voter sits at the cut locus of the converged mean");
    }
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] += v[i];
  }
  if (detail::norm(residual) > 1e-8) {
    throw UndefinedAtProfile("intrinsic mean iteration did not reach stationarity");
  }
  return mean;
}

}  // namespace detail

/// Builtin catalog.  Names: dictator, constant, normalized_mean,
/// antagonistic_mean, karcher_mean, rotated_dictator.
inline AggregationRule make_builtin(const std::string& name, int k, int dim_n,
                                    const RuleParams& params = {}) {
  if (k < 1) throw BadParams("rule needs k >= 1 voters");
  if (dim_n < 1) throw UnsupportedDimension("sphere dimension must be >= 1");

  auto sum_gauge = [](const Profile& p) { return detail::norm(detail::coordinate_sum(p)); };

  if (name == "dictator") {
    const int w = params.winner;
    if (w < 1 || w > k) throw BadParams("dictator winner must lie in 1..k");
    return AggregationRule(
        "dictator", k, dim_n, Totality::total_continuous, 1.0,
        [w](const Profile& p) { return p.voter(w); });
  }
  if (name == "constant") {
    SpherePoint c = params.center.value_or(SpherePoint::basepoint(dim_n));
    if (c.dim_n() != dim_n) throw BadParams("constant rule center has the wrong dimension");
    return AggregationRule(
        "constant", k, dim_n, Totality::total_continuous, 0.0,
        [c](const Profile&) { return c; });
  }
  if (name == "rotated_dictator") {
    const int w = params.winner;
    if (w < 1 || w > k) throw BadParams("rotated_dictator winner must lie in 1..k");
    if (!std::isfinite(params.rotation_angle)) throw BadParams("rotation angle must be finite");
    const double angle = params.rotation_angle;
    return AggregationRule(
        "rotated_dictator", k, dim_n, Totality::total_continuous, 1.0,
        [w, angle](const Profile& p) {
          return detail::rotate_in_plane_12(p.voter(w), angle);
        });
  }
  if (name == "normalized_mean") {
    return AggregationRule(
        "normalized_mean", k, dim_n, Totality::partial, std::nullopt,
        [](const Profile& p) { return detail::normalized_sum(p); }, sum_gauge);
  }
  if (name == "antagonistic_mean") {
    return AggregationRule(
        "antagonistic_mean", k, dim_n, Totality::partial, std::nullopt,
        [](const Profile& p) { return antipode(detail::normalized_sum(p)); }, sum_gauge);
  }
  if (name == "karcher_mean") {
    if (params.max_iter < 1) throw BadParams("karcher_mean max_iter must be >= 1");
    if (!(params.step_tol > 0.0)) throw BadParams("karcher_mean step_tol must be > 0");
    const int max_iter = params.max_iter;
    const double step_tol = params.step_tol;
    return AggregationRule(
        "karcher_mean", k, dim_n, Totality::partial, std::nullopt,
        [max_iter, step_tol](const Profile& p) {
          return detail::karcher_mean(p, max_iter, step_tol);
        },
        sum_gauge);
  }
  throw BadParams("unknown builtin rule '" + name + "'");
}

/// A rule per voter count, for participation analysis.
struct RuleFamily {
  std::string name;
  int dim_n = 1;
  int k_min = 2;
  std::function<AggregationRule(int)> generator;

  AggregationRule at(int k) const {
    if (k < k_min) {
      throw BadK("family '" + name + "' supports k >= " + std::to_string(k_min) + ", got " +
                 std::to_string(k));
    }
    auto rule = generator(k);
    if (rule.k() != k || rule.dim_n() != dim_n) {
      throw BadParams("family generator returned a rule with mismatched (k, dim)");
    }
    return rule;
  }
};

/// Family version of the builtin catalog: the same rule shape at every k.
inline RuleFamily make_builtin_family(const std::string& name, int dim_n,
                                      const RuleParams& params = {}) {
  // Validate eagerly so bad parameters surface at construction.
  make_builtin(name, std::max(2, params.winner), dim_n, params);
  RuleFamily family;
  family.name = name;
  family.dim_n = dim_n;
  family.k_min = std::max(2, params.winner);
  family.generator = [name, dim_n, params](int k) { return make_builtin(name, k, dim_n, params); };
  return family;
}

}  // namespace topovote
