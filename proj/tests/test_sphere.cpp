#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "topovote/sphere.hpp"

using namespace topovote;
using Catch::Matchers::WithinAbs;

namespace {

SpherePoint e1(int n = 1) { return SpherePoint::basepoint(n); }
SpherePoint e2(int n = 1) { return SpherePoint::unit_axis(n, 2); }

}  // namespace

TEST_CASE("geodesic distance on axis points") {
  CHECK(geodesic_distance(e1(), e1()) == 0.0);
  CHECK_THAT(geodesic_distance(e1(), antipode(e1())), WithinAbs(kPi, 1e-15));
  CHECK_THAT(geodesic_distance(e1(), e2()), WithinAbs(kPi / 2.0, 1e-15));
  CHECK_THROWS_AS(geodesic_distance(e1(1), e1(2)), DimensionMismatch);
}

TEST_CASE("point validation") {
  CHECK_THROWS_AS(SpherePoint({1.0}), InvalidPoint);
  CHECK_THROWS_AS(SpherePoint({0.5, 0.5}), InvalidPoint);
  CHECK_NOTHROW(SpherePoint({1.0, 1e-10}));  // representation noise is fine
}

TEST_CASE("normalize") {
  const SpherePoint a = normalize({2.0, 0.0});
  CHECK(a == e1());
  const SpherePoint b = normalize({1.0, 1.0, 0.0});
  CHECK_THAT(b[0], WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(b[1], WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK(b[2] == 0.0);
  CHECK_THROWS_AS(normalize({1e-14, 0.0}), NearZeroVector);
}

TEST_CASE("antipode is a bitwise involution") {
  CHECK(antipode(e1()) == SpherePoint({-1.0, -0.0}));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint x = random_sphere_point(rng, i % 2 + 1);
    CHECK(antipode(antipode(x)) == x);
    CHECK_THAT(geodesic_distance(x, antipode(x)), WithinAbs(kPi, 1e-7));
  }
}

TEST_CASE("chord homotopy endpoints and midpoint") {
  std::mt19937_64 rng(23);
  const SpherePoint x = random_sphere_point(rng, 2);
  const SpherePoint gx = random_sphere_point(rng, 2);
  CHECK(chord_homotopy(0.0, x, gx) == x);
  CHECK(chord_homotopy(1.0, x, gx) == gx);
  const SpherePoint mid = chord_homotopy(0.5, e1(), e2());
  CHECK_THAT(mid[0], WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(mid[1], WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THROWS_AS(chord_homotopy(0.5, e1(), antipode(e1())), AntipodalPair);
  CHECK_THROWS_AS(chord_homotopy(-0.1, x, gx), BadParams);
}

TEST_CASE("chord homotopy is unit norm and continuous in t") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint x = random_sphere_point(rng, 2);
    SpherePoint gx = random_sphere_point(rng, 2);
    if (geodesic_distance(gx, antipode(x)) < 0.2) gx = antipode(gx);
    const double t = detail::uniform01(rng);
    const SpherePoint h = chord_homotopy(t, x, gx);
    double norm2 = 0.0;
    for (double c : h.coords()) norm2 += c * c;
    CHECK_THAT(std::sqrt(norm2), WithinAbs(1.0, 1e-9));
    const double t2 = std::min(1.0, t + 1e-6);
    CHECK(geodesic_distance(h, chord_homotopy(t2, x, gx)) <= 1e-3);
  }
}

TEST_CASE("circle grid nets") {
  const SampleNet net = build_net(1, 4, NetKind::circle_grid);
  REQUIRE(net.points.size() == 4);
  CHECK(net.mesh == kPi / 4.0);
  for (int t = 0; t < 4; ++t) {
    CHECK_THAT(geodesic_distance(net.points[t], SpherePoint::from_angle(kPi * t / 2.0)),
               WithinAbs(0.0, 1e-15));
  }
  CHECK_THROWS_AS(build_net(2, 4, NetKind::circle_grid), UnsupportedDimension);
}

TEST_CASE("circle grid mesh is an empirical covering radius") {
  const int size = 64;
  const SampleNet net = build_net(1, size, NetKind::circle_grid);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const SpherePoint x = random_sphere_point(rng, 1);
    double nearest = kPi;
    for (const auto& p : net.points) nearest = std::min(nearest, geodesic_distance(x, p));
    CHECK(nearest <= net.mesh + 1e-12);
  }
}

TEST_CASE("fibonacci lattice") {
  const SampleNet net = build_net(2, 1000, NetKind::fibonacci_s2);
  REQUIRE(net.points.size() == 1000);
  CHECK(net.mesh == 2.0 * std::sqrt(4.0 * kPi / 1000.0));
  for (const auto& p : net.points) {
    double norm2 = 0.0;
    for (double c : p.coords()) norm2 += c * c;
    CHECK_THAT(std::sqrt(norm2), WithinAbs(1.0, 1e-9));
  }
  CHECK_THROWS_AS(build_net(1, 10, NetKind::fibonacci_s2), UnsupportedDimension);
}

TEST_CASE("uniform random nets are deterministic per seed") {
  const SampleNet a = build_net(1, 100, NetKind::uniform_random, 7);
  const SampleNet b = build_net(1, 100, NetKind::uniform_random, 7);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
  const SampleNet c = build_net(1, 100, NetKind::uniform_random, 8);
  CHECK(!(a.points[0] == c.points[0]));
  CHECK_THROWS_AS(build_net(1, 0, NetKind::uniform_random), BadParams);
}

TEST_CASE("metric axioms on random triples") {
  for (int n : {1, 2}) {
    std::mt19937_64 rng(100 + n);
    for (int i = 0; i < 20000; ++i) {
      const SpherePoint x = random_sphere_point(rng, n);
      const SpherePoint y = random_sphere_point(rng, n);
      const SpherePoint z = random_sphere_point(rng, n);
      const double dxy = geodesic_distance(x, y);
      CHECK(dxy == geodesic_distance(y, x));
      CHECK(dxy >= 0.0);
      CHECK(dxy <= kPi);
      CHECK(geodesic_distance(x, z) <= dxy + geodesic_distance(y, z) + 1e-9);
    }
  }
}

TEST_CASE("log and exp maps invert each other") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint x = random_sphere_point(rng, 2);
    SpherePoint y = random_sphere_point(rng, 2);
    if (geodesic_distance(x, y) > kPi - 0.05) y = antipode(y);
    const auto v = log_map(x, y);
    CHECK_THAT(detail::norm(v), WithinAbs(geodesic_distance(x, y), 1e-9));
    CHECK(chordal_distance(exp_map(x, v), y) <= 1e-12);
  }
  CHECK_THROWS_AS(log_map(e1(), antipode(e1())), AntipodalPair);
}

TEST_CASE("tangent basis is orthonormal and tangent") {
  std::mt19937_64 rng(77);
  for (int n : {1, 2, 3}) {
    const SpherePoint x = random_sphere_point(rng, n);
    const auto basis = tangent_basis(x);
    REQUIRE(basis.size() == static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < basis.size(); ++a) {
      double dot_x = 0.0;
      for (std::size_t i = 0; i < x.ambient_dim(); ++i) dot_x += basis[a][i] * x[i];
      CHECK_THAT(dot_x, WithinAbs(0.0, 1e-12));
      for (std::size_t b = 0; b <= a; ++b) {
        double d = 0.0;
        for (std::size_t i = 0; i < x.ambient_dim(); ++i) d += basis[a][i] * basis[b][i];
        CHECK_THAT(d, WithinAbs(a == b ? 1.0 : 0.0, 1e-12));
      }
    }
  }
}
