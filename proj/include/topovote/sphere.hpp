#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "topovote/errors.hpp"

namespace topovote {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Unit-norm tolerance for point validation (representation noise).
inline constexpr double kUnitNormTol = 1e-9;
/// Below this norm a vector counts as zero and cannot be normalized.
inline constexpr double kNearZeroNorm = 1e-12;
/// Uniform tolerance for "equal distance" / "equal point" judgments.
inline constexpr double kEqualTol = 1e-9;
/// Geodesic tolerance for accepting a point as an antipodal witness.
inline constexpr double kAntipodalWitnessTol = 1e-6;

/// A unit vector in R^{n+1}, i.e. a point of the sphere S^n with n >= 1.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
      throw InvalidPoint("SpherePoint needs at least 2 coordinates (n >= 1), got " +
                         std::to_string(coords_.size()));
    }
    double norm2 = 0.0;
    for (double c : coords_) norm2 += c * c;
    const double norm = std::sqrt(norm2);
    if (std::abs(norm - 1.0) > kUnitNormTol) {
      throw InvalidPoint("SpherePoint is not unit norm: |v| = " + std::to_string(norm));
    }
  }

  /// The basepoint e1 = (1, 0, ..., 0) of S^n.
  static SpherePoint basepoint(int dim_n) { return unit_axis(dim_n, 1); }

  /// The coordinate axis point e_idx (1-based) of S^n.
  static SpherePoint unit_axis(int dim_n, int idx) {
    if (dim_n < 1) throw UnsupportedDimension("sphere dimension must be >= 1");
    if (idx < 1 || idx > dim_n + 1) {
      throw IndexOutOfRange("axis index " + std::to_string(idx) + " outside 1.." +
                            std::to_string(dim_n + 1));
    }
    std::vector<double> c(static_cast<std::size_t>(dim_n) + 1, 0.0);
    c[static_cast<std::size_t>(idx) - 1] = 1.0;
    return SpherePoint(std::move(c));
  }

  /// The point (cos theta, sin theta) of S^1.
  static SpherePoint from_angle(double theta) {
    return SpherePoint({std::cos(theta), std::sin(theta)});
  }

  int dim_n() const { return static_cast<int>(coords_.size()) - 1; }
  std::size_t ambient_dim() const { return coords_.size(); }
  const std::vector<double>& coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Bitwise coordinate equality (evaluation is deterministic, so this is
  /// the right notion for round-trip and determinism checks).
  bool operator==(const SpherePoint& other) const { return coords_ == other.coords_; }

 private:
  std::vector<double> coords_;
};

inline double dot(const SpherePoint& x, const SpherePoint& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw DimensionMismatch("dot product of points on different spheres");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.ambient_dim(); ++i) s += x[i] * y[i];
  return s;
}

/// Great-circle distance arccos(x . y), with the dot product clamped to
/// [-1, 1] since rounding can push it past 1 by ~1e-16.
inline double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  const double d = std::clamp(dot(x, y), -1.0, 1.0);
  return std::acos(d);
}

inline SpherePoint normalize(const std::vector<double>& v) {
  double norm2 = 0.0;
  for (double c : v) norm2 += c * c;
  const double norm = std::sqrt(norm2);
  if (norm <= kNearZeroNorm) {
    throw NearZeroVector("cannot normalize a vector of norm " + std::to_string(norm));
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return SpherePoint(std::move(out));
}

inline SpherePoint antipode(const SpherePoint& x) {
  std::vector<double> out(x.ambient_dim());
  for (std::size_t i = 0; i < x.ambient_dim(); ++i) out[i] = -x[i];
  return SpherePoint(std::move(out));
}

inline bool almost_equal(const SpherePoint& x, const SpherePoint& y,
                         double tol = kEqualTol) {
  return geodesic_distance(x, y) <= tol;
}

/// Straight-line distance in the ambient space.  Unlike the geodesic
/// metric it resolves separations below the arccos noise floor of ~1e-8,
/// so it is the right notion for "these are the same point" assertions.
inline double chordal_distance(const SpherePoint& x, const SpherePoint& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw DimensionMismatch("chordal distance of points on different spheres");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.ambient_dim(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Angle of a point of S^1 in [0, 2*pi), with (1, 0) at angle 0.
inline double angle_of(const SpherePoint& x) {
  if (x.dim_n() != 1) throw DimensionMismatch("angle_of needs a point of S^1");
  double theta = std::atan2(x[1], x[0]);
  if (theta < 0.0) theta += kTwoPi;
  return theta;
}

/// Normalized straight-line interpolation between x and gx.  Well defined
/// whenever gx is not the antipode of x; the endpoints are returned exactly.
inline SpherePoint chord_homotopy(double t, const SpherePoint& x, const SpherePoint& gx) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw BadParams("chord_homotopy parameter t must lie in [0, 1], got " + std::to_string(t));
  }
  if (x.ambient_dim() != gx.ambient_dim()) {
    throw DimensionMismatch("chord_homotopy endpoints on different spheres");
  }
  if (geodesic_distance(gx, antipode(x)) <= kEqualTol) {
    throw AntipodalPair("chord between antipodal points passes through the origin");
  }
  if (t == 0.0) return x;
  if (t == 1.0) return gx;
  std::vector<double> blend(x.ambient_dim());
  for (std::size_t i = 0; i < blend.size(); ++i) blend[i] = t * gx[i] + (1.0 - t) * x[i];
  return normalize(blend);
}

// ---- tangent-space helpers -------------------------------------------------

namespace detail {

inline std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return out;
}

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace detail

/// Orthonormal basis of the tangent space at x, via the Householder
/// reflection exchanging x with -sign(x0) * e1 (never degenerate).
inline std::vector<std::vector<double>> tangent_basis(const SpherePoint& x) {
  const std::size_t m = x.ambient_dim();
  const double sigma = x[0] >= 0.0 ? 1.0 : -1.0;
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = x[i];
  w[0] += sigma;
  const double wn = detail::norm(w);
  for (auto& c : w) c /= wn;
  std::vector<std::vector<double>> basis;
  basis.reserve(m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    std::vector<double> h(m, 0.0);
    h[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i) h[i] -= 2.0 * w[j] * w[i];
    basis.push_back(std::move(h));
  }
  return basis;
}

/// Exponential map: follow the geodesic from x with initial velocity v.
inline SpherePoint exp_map(const SpherePoint& x, const std::vector<double>& v) {
  if (v.size() != x.ambient_dim()) throw DimensionMismatch("tangent vector of wrong length");
  const double s = detail::norm(v);
  if (s < 1e-300) return x;
  std::vector<double> out(v.size());
  const double c = std::cos(s), k = std::sin(s) / s;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * x[i] + k * v[i];
  return normalize(out);
}

/// Inverse exponential map at x: tangent vector pointing toward y with
/// length d(x, y).  Undefined at the cut locus (y antipodal to x).
inline std::vector<double> log_map(const SpherePoint& x, const SpherePoint& y) {
  const double theta = geodesic_distance(x, y);
  if (theta > kPi - kEqualTol) {
    throw AntipodalPair("log map undefined at the cut locus");
  }
  std::vector<double> v(x.ambient_dim(), 0.0);
  if (theta < 1e-15) return v;
  const double c = std::clamp(dot(x, y), -1.0, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = y[i] - c * x[i];
  const double pn = detail::norm(v);
  if (pn <= kNearZeroNorm) return std::vector<double>(x.ambient_dim(), 0.0);
  for (auto& cc : v) cc *= theta / pn;
  return v;
}

// ---- random sampling and nets ----------------------------------------------

namespace detail {

/// 53-bit uniform in [0, 1) from the raw engine output; avoids the
/// implementation-defined std distributions so seeded runs are reproducible.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t len) {
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; i += 2) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[i] = r * std::cos(kTwoPi * u2);
    if (i + 1 < len) out[i + 1] = r * std::sin(kTwoPi * u2);
  }
  return out;
}

}  // namespace detail

/// Draw from the rotation-invariant distribution on S^n.
inline SpherePoint random_sphere_point(std::mt19937_64& rng, int dim_n) {
  if (dim_n < 1) throw UnsupportedDimension("sphere dimension must be >= 1");
  for (;;) {
    auto g = detail::gaussian_vector(rng, static_cast<std::size_t>(dim_n) + 1);
    if (detail::norm(g) > kNearZeroNorm) return normalize(g);
  }
}

enum class NetKind { circle_grid, fibonacci_s2, uniform_random };

inline std::string to_string(NetKind kind) {
  switch (kind) {
    case NetKind::circle_grid: return "circle_grid";
    case NetKind::fibonacci_s2: return "fibonacci_s2";
    case NetKind::uniform_random: return "uniform_random";
  }
  throw BadParams("unknown net kind");
}

/// Finite sample of a sphere with a guaranteed covering radius (`mesh`).
/// Construction is deterministic given (kind, size, seed).
struct SampleNet {
  std::vector<SpherePoint> points;
  double mesh = kPi;
  NetKind kind = NetKind::uniform_random;
  int size = 0;
  std::uint64_t seed = 0;
};

inline SampleNet build_net(int dim_n, int size, NetKind kind,
                           std::optional<std::uint64_t> seed = std::nullopt) {
  if (size < 1) throw BadParams("net size must be >= 1, got " + std::to_string(size));
  if (dim_n < 1) throw UnsupportedDimension("sphere dimension must be >= 1");
  SampleNet net;
  net.kind = kind;
  net.size = size;
  net.seed = seed.value_or(0);
  net.points.reserve(static_cast<std::size_t>(size));
  switch (kind) {
    case NetKind::circle_grid: {
      if (dim_n != 1) throw UnsupportedDimension("circle_grid needs n = 1");
      for (int t = 0; t < size; ++t) {
        net.points.push_back(SpherePoint::from_angle(kTwoPi * t / size));
      }
      net.mesh = kPi / size;
      break;
    }
    case NetKind::fibonacci_s2: {
      if (dim_n != 2) throw UnsupportedDimension("fibonacci_s2 needs n = 2");
      // Golden-section spiral; z sampled at strip midpoints so the poles
      // themselves are excluded.
      const double dz = 2.0 / size;
      const double dtheta = kPi * (std::sqrt(5.0) + 1.0);
      double z = -1.0 + 0.5 * dz;
      double theta = 0.0;
      for (int i = 0; i < size; ++i) {
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        net.points.push_back(normalize({r * std::cos(theta), r * std::sin(theta), z}));
        z += dz;
        theta += dtheta;
      }
      // Conservative covering-radius estimate for the spiral lattice.
      net.mesh = 2.0 * std::sqrt(4.0 * kPi / size);
      break;
    }
    case NetKind::uniform_random: {
      std::mt19937_64 rng(net.seed);
      for (int i = 0; i < size; ++i) net.points.push_back(random_sphere_point(rng, dim_n));
      // A random sample guarantees nothing better than the trivial bound.
      net.mesh = kPi;
      break;
    }
  }
  return net;
}

/// Deterministic structured net for the given dimension: circle grid on S^1,
/// fibonacci lattice on S^2, seeded random elsewhere.
inline SampleNet covering_net(int dim_n, int size, std::uint64_t seed = 0) {
  if (dim_n == 1) return build_net(1, size, NetKind::circle_grid);
  if (dim_n == 2) return build_net(2, size, NetKind::fibonacci_s2);
  return build_net(dim_n, size, NetKind::uniform_random, seed);
}

}  // namespace topovote
