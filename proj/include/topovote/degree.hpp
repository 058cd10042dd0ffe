#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topovote/conditions.hpp"
#include "topovote/rules.hpp"

namespace topovote {

enum class DegreeMethod { winding_lift, simplicial_s2, nau_certificate };

inline std::string to_string(DegreeMethod m) {
  switch (m) {
    case DegreeMethod::winding_lift: return "winding_lift";
    case DegreeMethod::simplicial_s2: return "simplicial_s2";
    case DegreeMethod::nau_certificate: return "nau_certificate";
  }
  throw BadParams("unknown degree method");
}

struct DegreeResult {
  int value = 0;
  DegreeMethod method = DegreeMethod::winding_lift;
  long samples_used = 0;
  int refinement_depth = 0;
  // winding: distance of the raw angle total from the nearest integer;
  // simplicial: how many independent target points agreed.
  double residual = 0.0;
};

// ---- winding numbers on S^1 -------------------------------------------

struct WindingConfig {
  int initial_samples = 256;
  int max_depth = 20;
};

/// Increments near +-pi are ambiguous under rounding, so refinement kicks
/// in a guard band early.
inline constexpr double kWindingGuard = 0.1;
inline constexpr double kWindingResidualTol = 1e-6;

namespace detail {

/// Wrap to (-pi, pi].
inline double wrap_angle(double d) {
  d = std::remainder(d, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

}  // namespace detail

/// Degree of a circle self-map by adaptive angle lifting: walk the circle,
/// accumulate wrapped image-angle increments, and bisect any arc whose
/// increment comes close to +-pi.
inline DegreeResult winding_number(const SphereSelfMap& g, const WindingConfig& cfg = {}) {
  if (g.dim_n != 1) throw DimensionMismatch("winding_number needs a self-map of S^1");
  if (cfg.initial_samples < 3) throw BadParams("winding needs at least 3 initial samples");
  if (cfg.max_depth < 0) throw BadParams("max_depth must be >= 0");

  long evals = 0;
  int deepest = 0;
  auto image_angle = [&](double theta) {
    ++evals;
    return angle_of(g(SpherePoint::from_angle(theta)));
  };

  std::function<double(double, double, double, double, int)> arc =
      [&](double ta, double tb, double fa, double fb, int depth) -> double {
    const double d = detail::wrap_angle(fb - fa);
    if (std::abs(d) < kPi - kWindingGuard) return d;
    if (depth >= cfg.max_depth) {
      throw RefinementExceeded(
          "image angle jumps by " + std::to_string(d) + " across the arc [" +
          std::to_string(ta) + ", " + std::to_string(tb) +
          "] after max refinement; discontinuity or undefined point suspected");
    }
    if (depth + 1 > deepest) deepest = depth + 1;
    const double tm = 0.5 * (ta + tb);
    const double fm = image_angle(tm);
    return arc(ta, tm, fa, fm, depth + 1) + arc(tm, tb, fm, fb, depth + 1);
  };

  const double f0 = image_angle(0.0);
  double total = 0.0;
  double t_prev = 0.0, f_prev = f0;
  for (int s = 1; s <= cfg.initial_samples; ++s) {
    const double t = kTwoPi * s / cfg.initial_samples;
    // Close the loop on the exact starting image so the total is a clean
    // multiple of 2*pi up to accumulation error.
    const double f = (s == cfg.initial_samples) ? f0 : image_angle(t);
    total += arc(t_prev, t, f_prev, f, 0);
    t_prev = t;
    f_prev = f;
  }

  const double raw = total / kTwoPi;
  const long value = std::lround(raw);
  const double residual = std::abs(raw - static_cast<double>(value));
  if (residual > kWindingResidualTol) {
    throw NonIntegerTotal("accumulated winding " + std::to_string(raw) +
                          " is not within 1e-6 of an integer");
  }
  return {static_cast<int>(value), DegreeMethod::winding_lift, evals, deepest, residual};
}

// ---- simplicial degree on S^2 ------------------------------------------

struct SimplicialConfig {
  int subdivision_level = 5;
  int targets = 3;
  std::uint64_t seed = 0;
};

namespace detail {

using Vec3 = std::array<double, 3>;

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
         a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline double geo3(const Vec3& a, const Vec3& b) {
  double d = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  if (d > 1.0) d = 1.0;
  if (d < -1.0) d = -1.0;
  return std::acos(d);
}

inline Vec3 unit3(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Icosahedron subdivided `level` times, vertices projected to the sphere,
/// all faces oriented outward (positive determinant).
inline TriMesh icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh mesh;
  mesh.vertices = {
      unit3({-1, t, 0}), unit3({1, t, 0}),  unit3({-1, -t, 0}), unit3({1, -t, 0}),
      unit3({0, -1, t}), unit3({0, 1, t}),  unit3({0, -1, -t}), unit3({0, 1, -t}),
      unit3({t, 0, -1}), unit3({t, 0, 1}),  unit3({-t, 0, -1}), unit3({-t, 0, 1})};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& f : mesh.faces) {
    if (det3(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]) < 0.0) {
      std::swap(f[1], f[2]);
    }
  }
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = a < b ? std::pair(a, b) : std::pair(b, a);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const Vec3& va = mesh.vertices[a];
      const Vec3& vb = mesh.vertices[b];
      mesh.vertices.push_back(unit3({va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]}));
      const int idx = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  return mesh;
}

inline constexpr double kDegenerateDet = 1e-12;

/// Signed number of image triangles covering y, or nullopt when y lands so
/// close to an image edge that the count would be untrustworthy.
inline std::optional<int> count_coverings(const std::vector<Vec3>& image,
                                          const std::vector<std::array<int, 3>>& faces,
                                          const Vec3& y) {
  int total = 0;
  for (const auto& f : faces) {
    const Vec3& a = image[f[0]];
    const Vec3& b = image[f[1]];
    const Vec3& c = image[f[2]];
    const double dT = det3(a, b, c);
    if (std::abs(dT) < kDegenerateDet) continue;  // flat image, no interior
    const double sT = dT > 0.0 ? 1.0 : -1.0;
    const double s1 = det3(a, b, y);
    const double s2 = det3(b, c, y);
    const double s3 = det3(c, a, y);
    const bool tiny1 = std::abs(s1) < kDegenerateDet;
    const bool tiny2 = std::abs(s2) < kDegenerateDet;
    const bool tiny3 = std::abs(s3) < kDegenerateDet;
    if (!tiny1 && !tiny2 && !tiny3) {
      if (s1 * sT > 0.0 && s2 * sT > 0.0 && s3 * sT > 0.0) total += static_cast<int>(sT);
      continue;
    }
    // A tiny determinant only matters if the remaining signs leave the
    // containment undecided.
    const bool blocked = (!tiny1 && s1 * sT < 0.0) || (!tiny2 && s2 * sT < 0.0) ||
                         (!tiny3 && s3 * sT < 0.0);
    if (!blocked) return std::nullopt;
  }
  return total;
}

}  // namespace detail

/// Degree of a self-map of S^2 by simplicial approximation: map the icosphere
/// vertices, check the image triangles stay hemisphere-small, then count
/// signed coverings of several independent random targets.
inline DegreeResult simplicial_degree_s2(const SphereSelfMap& g, const SimplicialConfig& cfg = {}) {
  if (g.dim_n != 2) throw DimensionMismatch("simplicial_degree_s2 needs a self-map of S^2");
  if (cfg.subdivision_level < 0 || cfg.subdivision_level > 8) {
    throw BadParams("subdivision level must lie in 0..8");
  }
  if (cfg.targets < 3) throw BadParams("need at least 3 cross-validation targets");

  detail::TriMesh mesh;
  std::vector<detail::Vec3> image;
  int used_level = -1;
  for (int level = cfg.subdivision_level; level <= cfg.subdivision_level + 3; ++level) {
    mesh = detail::icosphere(level);
    image.clear();
    image.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices) {
      const SpherePoint p = g(SpherePoint({v[0], v[1], v[2]}));
      image.push_back({p[0], p[1], p[2]});
    }
    bool star_ok = true;
    for (const auto& f : mesh.faces) {
      const double diam = std::max({detail::geo3(image[f[0]], image[f[1]]),
                                    detail::geo3(image[f[1]], image[f[2]]),
                                    detail::geo3(image[f[2]], image[f[0]])});
      if (diam >= kPi / 2.0) {
        star_ok = false;
        break;
      }
    }
    if (star_ok) {
      used_level = level;
      break;
    }
  }
  if (used_level < 0) {
    throw StarConditionFailed("image triangles exceed diameter pi/2 even at subdivision level " +
                              std::to_string(cfg.subdivision_level + 3));
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> counts;
  counts.reserve(static_cast<std::size_t>(cfg.targets));
  for (int t = 0; t < cfg.targets; ++t) {
    std::optional<int> count;
    for (int draw = 0; draw < 10 && !count; ++draw) {
      const SpherePoint y = random_sphere_point(rng, 2);
      count = detail::count_coverings(image, mesh.faces, {y[0], y[1], y[2]});
    }
    if (!count) {
      throw TargetDisagreement("target kept landing within 1e-12 of an image edge in 10 draws");
    }
    counts.push_back(*count);
  }
  for (int c : counts) {
    if (c != counts.front()) {
      std::string all;
      for (int v : counts) all += std::to_string(v) + " ";
      throw TargetDisagreement("covering counts disagree across targets: " + all);
    }
  }
  return {counts.front(), DegreeMethod::simplicial_s2,
          static_cast<long>(mesh.vertices.size()), used_level,
          static_cast<double>(cfg.targets)};
}

// ---- dispatch and rule-level reports -------------------------------------

struct DegreeConfig {
  WindingConfig winding;
  SimplicialConfig simplicial;
};

inline DegreeResult degree(const SphereSelfMap& g, int dim_n, const DegreeConfig& cfg = {}) {
  if (g.dim_n != dim_n) throw DimensionMismatch("map dimension does not match requested sphere");
  if (dim_n == 1) return winding_number(g, cfg.winding);
  if (dim_n == 2) return simplicial_degree_s2(g, cfg.simplicial);
  throw UnsupportedDimension(
      "no direct degree computation for n >= 3; homotopy_certificate_nau covers the "
      "dimension-agnostic degree-one case");
}

struct PairDegree {
  int i = 0;
  int j = 0;
  std::optional<int> deg;
};

/// Coordinate degrees d_alpha and pairwise degrees deg(f_{i,j}) of a rule,
/// with the additivity law D[i,j] = d_i + d_j checked per pair.  A pair
/// counts as a failure when the identity is violated or cannot be confirmed
/// because an entry is unavailable.
struct DegreeReport {
  std::string rule_name;
  int k = 0;
  int dim_n = 0;
  std::vector<std::optional<int>> d;  // d[alpha - 1]
  std::vector<PairDegree> pairs;      // ordered (i, j), i < j
  bool additivity_ok = false;
  std::vector<std::pair<int, int>> failures;
  std::vector<std::string> diagnostics;

  bool complete() const {
    for (const auto& e : d) {
      if (!e) return false;
    }
    for (const auto& p : pairs) {
      if (!p.deg) return false;
    }
    return true;
  }

  std::optional<int> pair_degree(int i, int j) const {
    for (const auto& p : pairs) {
      if (p.i == i && p.j == j) return p.deg;
    }
    throw IndexOutOfRange("no pair (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") in this report");
  }
};

inline DegreeReport coordinate_degrees(const AggregationRule& rule, const DegreeConfig& cfg = {}) {
  if (rule.dim_n() != 1 && rule.dim_n() != 2) {
    throw UnsupportedDimension("coordinate degrees need dim_n in {1, 2}");
  }
  DegreeReport report;
  report.rule_name = rule.name();
  report.k = rule.k();
  report.dim_n = rule.dim_n();
  report.d.resize(static_cast<std::size_t>(rule.k()));
  for (int alpha = 1; alpha <= rule.k(); ++alpha) {
    try {
      report.d[static_cast<std::size_t>(alpha) - 1] =
          degree(restrict_coordinate(rule, alpha), rule.dim_n(), cfg).value;
    } catch (const Error& e) {
      report.diagnostics.push_back("d[" + std::to_string(alpha) +
                                   "] unavailable: " + e.what());
    }
  }
  for (int i = 1; i <= rule.k(); ++i) {
    for (int j = i + 1; j <= rule.k(); ++j) {
      PairDegree entry{i, j, std::nullopt};
      try {
        entry.deg = degree(restrict_pair(rule, i, j), rule.dim_n(), cfg).value;
      } catch (const Error& e) {
        report.diagnostics.push_back("D[" + std::to_string(i) + "," + std::to_string(j) +
                                     "] unavailable: " + e.what());
      }
      report.pairs.push_back(entry);
    }
  }
  for (const auto& p : report.pairs) {
    const auto& di = report.d[static_cast<std::size_t>(p.i) - 1];
    const auto& dj = report.d[static_cast<std::size_t>(p.j) - 1];
    if (!p.deg || !di || !dj || *p.deg != *di + *dj) {
      report.failures.emplace_back(p.i, p.j);
    }
  }
  report.additivity_ok = report.failures.empty();
  return report;
}

struct AdditivityCheck {
  bool consistent = false;
  std::vector<std::pair<int, int>> violations;
};

/// Integer-exact re-check of the additivity law on a complete report.
inline AdditivityCheck additivity_check(const DegreeReport& report) {
  if (!report.complete()) {
    throw IncompleteReport("degree report has unavailable entries; cannot check additivity");
  }
  AdditivityCheck out;
  for (const auto& p : report.pairs) {
    if (*p.deg != *report.d[static_cast<std::size_t>(p.i) - 1] +
                      *report.d[static_cast<std::size_t>(p.j) - 1]) {
      out.violations.emplace_back(p.i, p.j);
    }
  }
  out.consistent = out.violations.empty();
  return out;
}

// ---- homotopy-to-identity certificates ------------------------------------

/// Outcome of the covering-argument certificate: a gap above (1 + L) * mesh
/// proves g never maps a point to its antipode, so the normalized chord
/// interpolation is a homotopy to the identity and deg(g) = 1 in any
/// dimension.
struct HomotopyCertificate {
  bool certified = false;
  double gap = 0.0;
  double slack = 0.0;
  NauScanResult scan;

  DegreeResult to_degree_result() const {
    if (!certified) throw Error("map is not certified; no degree conclusion available");
    return {1, DegreeMethod::nau_certificate, scan.net_size, 0, slack};
  }
};

inline HomotopyCertificate homotopy_certificate_nau(const SphereSelfMap& g,
                                                    double lipschitz_bound,
                                                    const SampleNet& net) {
  if (lipschitz_bound < 0.0) throw BadParams("Lipschitz bound must be >= 0");
  NauScanResult scan = scan_nau(g, net, lipschitz_bound);
  const double gap = scan.gap;
  const double slack = scan.certificate_slack.value_or(gap - (1.0 + lipschitz_bound) * net.mesh);
  const bool certified = scan.certified;
  return {certified, gap, slack, std::move(scan)};
}

}  // namespace topovote
