#include <catch_amalgamated.hpp>

#include <cmath>

#include <flr/particles.hpp>

using namespace flr;

namespace {
double circ_dist(double a, double b) {
  double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
  return std::min(d, two_pi - d);
}
}  // namespace

TEST_CASE("zero field: rotation is exact, k and guiding center invariant",
          "[particles]") {
  ParticleEnsemble p;
  p.eps = 0.1;
  p.add(1.0, 2.0, 0.8, -0.6);
  const FieldEval zero = [](double, double, double) -> Vec2 { return {0.0, 0.0}; };

  const double k0 = p.k_of(0);
  const Vec2 gc0 = p.guiding_center(0);
  const double dt = 0.013;
  for (int s = 0; s < 1000; ++s) {
    push_particles_cartesian(p, zero, dt);
    REQUIRE(std::abs(p.k_of(0) - k0) < 1e-14);
    const Vec2 gc = p.guiding_center(0);
    REQUIRE(circ_dist(gc[0], gc0[0]) < 1e-11);
    REQUIRE(circ_dist(gc[1], gc0[1]) < 1e-11);
  }

  // After exactly one gyration period the velocity returns to its start.
  ParticleEnsemble q;
  q.eps = 0.05;
  q.add(0.3, 0.4, 1.0, 0.5);
  const int n = 64;
  const double period_dt = two_pi * q.eps / n;
  for (int s = 0; s < n; ++s) push_particles_cartesian(q, zero, period_dt);
  REQUIRE(std::abs(q.v1[0] - 1.0) < 1e-12);
  REQUIRE(std::abs(q.v2[0] - 0.5) < 1e-12);
}

TEST_CASE("constant field: guiding center drifts at (E2, -E1)", "[particles]") {
  const Vec2 E{0.03, -0.02};
  const FieldEval field = [E](double, double, double) -> Vec2 { return E; };
  const double eps = 0.1, T = 1.0;

  ParticleEnsemble p;
  p.eps = eps;
  p.add(2.0, 3.0, 0.5, 0.2);
  const Vec2 gc0 = p.guiding_center(0);

  const int n = 200;
  for (int s = 0; s < n; ++s) push_particles_cartesian(p, field, T / n);
  const Vec2 gc = p.guiding_center(0);

  // Exact drift: gc(T) = gc(0) + T (E2, -E1). The splitting reproduces it
  // exactly for constant fields, up to roundoff.
  REQUIRE(circ_dist(gc[0], gc0[0] + T * E[1]) < 1e-12);
  REQUIRE(circ_dist(gc[1], gc0[1] - T * E[0]) < 1e-12);

  // Independent oracle: RK4 with dt/1000 on the stiff system.
  ParticleEnsemble r;
  r.eps = eps;
  r.add(2.0, 3.0, 0.5, 0.2);
  const int nr = 200 * 1000;
  for (int s = 0; s < nr; ++s) push_particles_rk4(r, field, T / nr);
  const Vec2 gcr = r.guiding_center(0);
  REQUIRE(circ_dist(gc[0], gcr[0]) < 1e-8);
  REQUIRE(circ_dist(gc[1], gcr[1]) < 1e-8);
}

TEST_CASE("smooth field: splitting converges to the RK4 reference", "[particles]") {
  const FieldEval field = [](double x1, double x2, double) -> Vec2 {
    return {0.05 * std::sin(x1), 0.05 * std::cos(x2)};
  };
  const double eps = 0.1, T = 0.5;

  auto run_split = [&](int n) {
    ParticleEnsemble p;
    p.eps = eps;
    p.add(1.0, 1.5, 0.6, -0.3);
    for (int s = 0; s < n; ++s) push_particles_cartesian(p, field, T / n);
    return p;
  };
  ParticleEnsemble ref;
  ref.eps = eps;
  ref.add(1.0, 1.5, 0.6, -0.3);
  const int nr = 100000;
  for (int s = 0; s < nr; ++s) push_particles_rk4(ref, field, T / nr);

  const ParticleEnsemble a = run_split(400), b = run_split(800);
  const double ea = std::hypot(circ_dist(a.x1[0], ref.x1[0]), circ_dist(a.x2[0], ref.x2[0])) +
                    std::hypot(a.v1[0] - ref.v1[0], a.v2[0] - ref.v2[0]);
  const double eb = std::hypot(circ_dist(b.x1[0], ref.x1[0]), circ_dist(b.x2[0], ref.x2[0])) +
                    std::hypot(b.v1[0] - ref.v1[0], b.v2[0] - ref.v2[0]);
  REQUIRE(ea < 1e-4);
  REQUIRE(eb < 0.35 * ea);  // ~2nd order: expect about 4x reduction
}

TEST_CASE("pusher validates its step size", "[particles]") {
  ParticleEnsemble p;
  p.add(0.0, 0.0, 1.0, 0.0);
  const FieldEval zero = [](double, double, double) -> Vec2 { return {0.0, 0.0}; };
  REQUIRE_THROWS_AS(push_particles_cartesian(p, zero, 0.0), DomainError);
  REQUIRE_THROWS_AS(push_particles_cartesian(p, zero, -0.1), DomainError);
}
