// Acceptance suite: every check below runs at a pinned tolerance and prints
// one PASS/FAIL line.  The binary exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "topovote/json_io.hpp"
#include "topovote/topovote.hpp"

using namespace topovote;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpherePoint e1(int n = 1) { return SpherePoint::basepoint(n); }

SphereSelfMap circle_power(int m) {
  return {"theta -> " + std::to_string(m) + " theta", 1, static_cast<double>(std::abs(m)),
          [m](const SpherePoint& x) { return SpherePoint::from_angle(m * angle_of(x)); }};
}

SphereSelfMap identity_map(int n) {
  return {"identity", n, 1.0, [](const SpherePoint& x) { return x; }};
}

// ---- criterion bodies -------------------------------------------------

void winding_oracle() {
  for (int m = -5; m <= 5; ++m) {
    const DegreeResult r = winding_number(circle_power(m), {.initial_samples = 256});
    expect(r.value == m, "deg(theta -> " + std::to_string(m) + " theta) = " +
                             std::to_string(r.value));
    expect(r.residual <= 1e-6, "winding residual above 1e-6");
  }
}

void identity_and_antipodal_degrees() {
  expect(winding_number(identity_map(1)).value == 1, "deg(id_S1) != 1");
  expect(simplicial_degree_s2(identity_map(2), {.subdivision_level = 5}).value == 1,
         "deg(id_S2) != 1");
  // Oracle: the antipodal map restricts -I, and det(-I) < 0 on R^3.
  expect(detail::det3({-1, 0, 0}, {0, -1, 0}, {0, 0, -1}) < 0.0, "orientation oracle broken");
  const SphereSelfMap anti{"antipodal", 2, 1.0,
                           [](const SpherePoint& x) { return antipode(x); }};
  expect(simplicial_degree_s2(anti, {.subdivision_level = 5}).value == -1,
         "deg(antipodal map on S^2) != -1");
}

void additivity_law() {
  struct Expected {
    AggregationRule rule;
    int winner;  // -1 for a constant rule
  };
  for (int dim : {1, 2}) {
    for (int k : {3, 4}) {
      std::vector<Expected> catalog;
      catalog.push_back({make_builtin("dictator", k, dim, {.winner = 1}), 1});
      catalog.push_back(
          {make_builtin("rotated_dictator", k, dim, {.winner = 1, .rotation_angle = kPi / 3.0}),
           1});
      catalog.push_back(
          {make_builtin("rotated_dictator", k, dim, {.winner = 1, .rotation_angle = kPi}), 1});
      catalog.push_back(
          {make_builtin("constant", k, dim, {.center = SpherePoint::unit_axis(dim, 2)}), -1});
      for (const auto& [rule, winner] : catalog) {
        const DegreeReport report = coordinate_degrees(rule);
        const std::string tag = rule.name() + " k=" + std::to_string(k) + " n=" +
                                std::to_string(dim);
        expect(report.complete(), tag + ": degrees unavailable");
        expect(additivity_check(report).consistent, tag + ": additivity violated");
        for (int alpha = 1; alpha <= k; ++alpha) {
          const int want = alpha == winner ? 1 : 0;
          expect(report.d[alpha - 1] == want, tag + ": d[" + std::to_string(alpha) + "] wrong");
        }
        for (const auto& p : report.pairs) {
          const int want = (p.i == winner || p.j == winner) ? 1 : 0;
          expect(p.deg == want, tag + ": pair degree wrong");
        }
      }
    }
  }
  for (const char* name : {"normalized_mean", "antagonistic_mean"}) {
    const DegreeReport report = coordinate_degrees(make_builtin(name, 3, 1));
    expect(report.complete(), std::string(name) + ": degrees unavailable");
    for (const auto& d : report.d) expect(d == 0, std::string(name) + ": d != (0,0,0)");
    for (const auto& p : report.pairs) expect(p.deg == 1, std::string(name) + ": D[i,j] != 1");
    expect(!report.additivity_ok, std::string(name) + ": additivity unexpectedly holds");
    expect(report.failures.size() == 3, std::string(name) + ": not every pair failed");
  }
}

void degree_system_verdicts() {
  for (int k = 3; k <= 64; ++k) {
    const DegreeSystemVerdict v = solve_twin_degree_system(k);
    expect(v.unsat, "k = " + std::to_string(k) + " not unsat");
    expect(!v.refutation_trace.empty() &&
               v.refutation_trace.back() == "d1 = 1/2, not an integer",
           "refutation trace does not end in d1 = 1/2");
  }
  const DegreeSystemVerdict k2 = solve_twin_degree_system(2);
  expect(!k2.unsat, "k = 2 not sat");
  expect(k2.witness_solution == std::vector<int>{1, 0}, "k = 2 witness is not (1, 0)");
}

void twin_theorem_reproduction() {
  struct Case {
    AggregationRule rule;
    SpherePoint expected_x0;
  };
  std::vector<Case> cases;
  cases.push_back({make_builtin("dictator", 3, 1, {.winner = 1}), antipode(e1())});
  for (double angle : {kPi / 3.0, kPi}) {
    cases.push_back(
        {make_builtin("rotated_dictator", 3, 1, {.winner = 1, .rotation_angle = angle}),
         antipode(detail::rotate_in_plane_12(e1(), angle))});
  }
  for (const auto& [rule, expected_x0] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const AuditReport report = run_twin_audit(rule, {.seed = 42});
    const double elapsed = seconds_since(t0);
    const std::string tag = rule.name();
    expect(elapsed < 10.0, tag + ": audit exceeded 10 s");
    expect(report.status == AuditStatus::proved_with_witness, tag + ": no witness");
    expect(report.chosen_pair == std::pair{2, 3}, tag + ": pair is not (2,3)");
    expect(report.antipode_residual <= 1e-9, tag + ": antipodal residual above 1e-9");
    expect(geodesic_distance(*report.antipodal_point, expected_x0) <= 1e-3,
           tag + ": x0 far from the expected antipode");
    const ViolationCertificate& cert = *report.certificate;
    expect(cert.kind == ViolationKind::strictness, tag + ": certificate not strictness");
    expect(std::abs(cert.d_before - kPi) <= 1e-9, tag + ": d_before != pi");
    expect(std::abs(cert.d_after - kPi) <= 1e-9, tag + ": d_after != pi");
    expect(cert.verified && verify_twin_certificate(cert, rule),
           tag + ": certificate failed re-verification");
  }
}

void noshow_theorem_reproduction() {
  for (const char* name : {"dictator", "constant"}) {
    const RuleFamily family = make_builtin_family(name, 1, {.winner = 1});
    const auto t0 = std::chrono::steady_clock::now();
    const AuditReport report = run_noshow_audit(family, 2, {.seed = 7});
    const double elapsed = seconds_since(t0);
    const std::string tag = std::string(name) + "-family";
    expect(elapsed < 10.0, tag + ": audit exceeded 10 s");
    expect(report.status == AuditStatus::proved_with_witness, tag + ": no witness");
    const ViolationCertificate& cert = *report.certificate;
    expect(cert.condition == ConditionId::participation, tag + ": wrong condition");
    expect(std::abs(cert.d_after - kPi) <= 1e-9,
           tag + ": participation outcome not at distance pi from the joiner");
    expect(cert.verified && verify_participation_certificate(cert, family),
           tag + ": certificate failed re-verification");
  }
}

void nau_certificate_soundness() {
  const SampleNet grid64 = build_net(1, 64, NetKind::circle_grid);
  expect(homotopy_certificate_nau(identity_map(1), 1.0, grid64).certified,
         "identity not certified on the 64 grid with L = 1");
  const SampleNet grid1024 = build_net(1, 1024, NetKind::circle_grid);
  const HomotopyCertificate doubler = homotopy_certificate_nau(circle_power(2), 2.0, grid1024);
  expect(!doubler.certified, "theta -> 2 theta wrongly certified");
  expect(doubler.gap == 0.0, "theta -> 2 theta gap nonzero despite the exact solution theta = pi");

  const SampleNet grid256 = build_net(1, 256, NetKind::circle_grid);
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const double amp = 0.05 + 0.15 * detail::uniform01(rng);
    const double phase = kTwoPi * detail::uniform01(rng);
    const SphereSelfMap g{"perturbed identity", 1, 1.0 + amp,
                          [amp, phase](const SpherePoint& x) {
                            const double t = angle_of(x);
                            return SpherePoint::from_angle(t + amp * std::sin(t + phase));
                          }};
    const HomotopyCertificate cert = homotopy_certificate_nau(g, 1.0 + amp, grid256);
    expect(cert.certified, "smooth degree-1 perturbation not certified");
    const AntipodeSearchResult found =
        find_antipodal_point(g, {.multistarts = 8, .seed = 3000 + static_cast<unsigned>(trial)});
    expect(!found.point.has_value(),
           "mutual exclusion violated: certified map admitted an antipodal point");
  }
}

void certificate_roundtrips() {
  long produced = 0;
  auto exercise = [&](const ViolationCertificate& cert, const std::string& tag) {
    const std::string once = to_json(cert).dump(2);
    const ViolationCertificate back = certificate_from_json(json::parse(once));
    expect(to_json(back).dump(2) == once, tag + ": JSON round-trip not a fixed point");
    expect(back.before_profile == cert.before_profile &&
               back.after_profile == cert.after_profile && back.d_before == cert.d_before &&
               back.d_after == cert.d_after && back.margin == cert.margin,
           tag + ": round-trip lost bits");
    ++produced;
  };

  const SearchConfig cfg_base{.net_size = 6, .refine_steps = 8, .random_restarts = 6};
  std::vector<AggregationRule> twin_rules;
  twin_rules.push_back(make_builtin("dictator", 3, 1, {.winner = 1}));
  twin_rules.push_back(make_builtin("dictator", 3, 1, {.winner = 2}));
  twin_rules.push_back(make_builtin("constant", 3, 1, {.center = SpherePoint::unit_axis(1, 2)}));
  twin_rules.push_back(
      make_builtin("rotated_dictator", 3, 1, {.winner = 1, .rotation_angle = kPi / 3.0}));
  twin_rules.push_back(make_builtin("antagonistic_mean", 3, 1));
  for (const auto& rule : twin_rules) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      SearchConfig cfg = cfg_base;
      cfg.seed = seed;
      const SearchResult found = search_twin_violation(rule, cfg);
      expect(found.certificate.has_value(), rule.name() + ": no twin certificate found");
      expect(verify_twin_certificate(*found.certificate, rule),
             rule.name() + ": twin certificate failed independent re-evaluation");
      exercise(*found.certificate, rule.name());
    }
  }
  std::vector<RuleFamily> families;
  families.push_back(make_builtin_family("dictator", 1, {.winner = 1}));
  families.push_back(make_builtin_family("constant", 1));
  families.push_back(make_builtin_family("antagonistic_mean", 1));
  families.push_back(
      make_builtin_family("rotated_dictator", 1, {.winner = 1, .rotation_angle = kPi}));
  for (const auto& family : families) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SearchConfig cfg = cfg_base;
      cfg.seed = seed;
      const SearchResult found = search_noshow_violation(family, 2, cfg);
      expect(found.certificate.has_value(), family.name + ": no participation certificate");
      expect(verify_participation_certificate(*found.certificate, family),
             family.name + ": participation certificate failed re-evaluation");
      exercise(*found.certificate, family.name);
    }
  }
  expect(produced == 100, "expected exactly 100 certificates, got " + std::to_string(produced));
}

void metric_axioms() {
  for (int n : {1, 2}) {
    std::mt19937_64 rng(4242 + n);
    for (int i = 0; i < 1000000; ++i) {
      const SpherePoint x = random_sphere_point(rng, n);
      const SpherePoint y = random_sphere_point(rng, n);
      const SpherePoint z = random_sphere_point(rng, n);
      const double dxy = geodesic_distance(x, y);
      if (dxy != geodesic_distance(y, x)) throw Failure("symmetry violated");
      if (dxy < 0.0 || dxy > kPi) throw Failure("distance out of [0, pi]");
      if (geodesic_distance(x, z) > dxy + geodesic_distance(y, z) + 1e-9) {
        throw Failure("triangle inequality violated beyond 1e-9");
      }
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double budget_seconds;  // 0 = unenforced
    std::function<void()> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "winding oracle: deg(theta -> m theta) = m for m in -5..5", 1.0, winding_oracle},
      {2, "deg(id) = 1 on S^1 and S^2; antipodal map gives -1", 5.0,
       identity_and_antipodal_degrees},
      {3, "degree additivity: exact for continuous rules, broken for partial means", 30.0,
       additivity_law},
      {4, "degree system: unsat with the d1 = 1/2 trace for k in 3..64, sat at k = 2", 1.0,
       degree_system_verdicts},
      {5, "twin audits produce verified strictness certificates at distance pi", 30.0,
       twin_theorem_reproduction},
      {6, "no-show audits produce verified participation certificates", 20.0,
       noshow_theorem_reproduction},
      {7, "NAU certificates: sound, refusing theta -> 2 theta, excluding antipodal points", 30.0,
       nau_certificate_soundness},
      {8, "100 searched certificates re-verify and round-trip bitwise through JSON", 0.0,
       certificate_roundtrips},
      {9, "metric axioms on 10^6 random triples per sphere", 10.0, metric_axioms},
  };

  bool all_passed = true;
  for (const auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string failure;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    const double elapsed = seconds_since(t0);
    if (failure.empty() && criterion.budget_seconds > 0.0 &&
        elapsed > criterion.budget_seconds) {
      std::ostringstream msg;
      msg << "time budget exceeded: " << elapsed << " s > " << criterion.budget_seconds << " s";
      failure = msg.str();
    }
    if (failure.empty()) {
      std::printf("PASS  %d  %s  (%.2fs)\n", criterion.id, criterion.name.c_str(), elapsed);
    } else {
      std::printf("FAIL  %d  %s  (%.2fs): %s\n", criterion.id, criterion.name.c_str(), elapsed,
                  failure.c_str());
      all_passed = false;
    }
  }
  return all_passed ? 0 : 1;
}
