#include <doctest.h>

#include "sbp/concentration.hpp"
#include "sbp/optimizer.hpp"

#include <cmath>

using namespace sbp;

TEST_SUITE("optimizer") {

TEST_CASE("solve config validation") {
  SolveConfig bad;
  bad.tol_residual = 0.0;
  CHECK_THROWS_AS(bad.validate(), DegenerateInput);
  bad = SolveConfig{};
  bad.armijo_c = 1.0;
  CHECK_THROWS_AS(bad.validate(), DegenerateInput);
  bad = SolveConfig{};
  bad.step_shrink = 1.0;
  CHECK_THROWS_AS(bad.validate(), DegenerateInput);
  SolveConfig{}.validate();
}

TEST_CASE("minimize refuses a zero start") {
  GridSpec g(12, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::zero(), 1.0);
  CHECK_THROWS_AS(minimize(P, ScalarField(g), SolveConfig{}), DegenerateInput);
}

TEST_CASE("constant potential ground state matches the radial solver") {
  GridSpec g(32, 12.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::zero(), 1.0);
  SolveConfig cfg;
  // the translation-invariant problem has a roundoff residual floor near
  // 1e-8 on this box, so run the cross-check at a slightly looser tolerance
  cfg.tol_residual = 1e-7;
  SolutionRecord rec = minimize(P, gaussian_field(g, 1.0, Vec3::Zero(), -1.0), cfg);
  REQUIRE(rec.converged);
  CHECK(rec.lambda < 0.0);
  CHECK(rec.energy > 0.0);
  CHECK(std::abs(rec.constraint - P.c()) <= 1e-8 * P.c());
  CHECK(rec.residual <= cfg.tol_residual * 10.0);

  AutonomousGroundState gs =
      autonomous_ground_state(1.0, Nonlinearity::zero(), 1.0, RadialGrid(2000, 18.0), cfg);
  REQUIRE(gs.converged);
  ScalarField ref = sample_field(g, [&](double x, double y, double z) {
    return radial_interpolate(gs.profile, std::sqrt(x * x + y * y + z * z));
  });
  // coarse-grid bound; the box-tail error dominates below L = 12 and the
  // resolved 1e-3 match is exercised at n = 48 in the acceptance run
  const double dist = norm_l2(ScalarField(g, rec.u.values - ref.values)) / norm_l2(ref);
  CHECK(dist <= 2e-3);

  SUBCASE("restarting from the solution is a fixed point") {
    SolutionRecord again = minimize(P, rec.u, cfg);
    CHECK(again.converged);
    CHECK(again.iterations <= 2);
    CHECK(again.energy == doctest::Approx(rec.energy).epsilon(1e-12));
  }

  SUBCASE("energy is nonincreasing along accepted descent steps") {
    REQUIRE(rec.energies.size() >= 2);
    for (size_t i = 1; i < rec.energies.size(); ++i)
      CHECK(rec.energies[i] <= rec.energies[i - 1]);
  }
}

TEST_CASE("non-convergence is a flagged record, not an error") {
  GridSpec g(12, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::zero(), 1.0);
  SolveConfig cfg;
  cfg.max_iter = 2;
  SolutionRecord rec = minimize(P, gaussian_field(g, 1.0, Vec3::Zero(), -1.0), cfg);
  CHECK_FALSE(rec.converged);
  CHECK(rec.residual > 0.0);
  CHECK(rec.iterations <= cfg.max_iter);
}

TEST_CASE("tangent step and reprojection preserve the constraint") {
  GridSpec g(12, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::zero(), 1.0);
  // tangency of the projected direction: <Pi d, b> = 0
  ScalarField u = project_to_manifold(P, gaussian_field(g)).tu;
  ScalarField gr = euclidean_gradient(P, u);
  ScalarField b = constraint_gradient(P, u);
  const double bb = inner(b, b);
  ScalarField d(g, gr.values - (inner(gr, b) / bb) * b.values);
  CHECK(std::abs(inner(d, b)) <= 1e-12 * std::sqrt(inner(d, d) * bb));

  SolveConfig cfg;
  cfg.max_iter = 50;
  SolutionRecord rec = minimize(P, gaussian_field(g, 1.0, Vec3::Zero(), -1.0), cfg);
  CHECK(std::abs(rec.constraint - P.c()) <= 1e-10 * P.c());
}

TEST_CASE("one-sign family keeps a nonpositive start negative") {
  GridSpec g(16, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::one_sign(3.0, 1.0), 1.0);
  SolveConfig cfg;
  SolutionRecord rec = minimize(P, gaussian_field(g, 1.0, Vec3::Zero(), -1.0), cfg);
  REQUIRE(rec.converged);
  CHECK(rec.sign_class == SignClass::negative);
}

TEST_CASE("multi_start deduplicates and sorts") {
  GridSpec g(12, 6.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::zero(), 1.0);
  SolveConfig cfg;
  ScalarField s0 = gaussian_field(g, 1.0, Vec3::Zero(), -1.0);

  CHECK(multi_start(P, {}, cfg).empty());

  auto recs = multi_start(P, {s0, s0}, cfg);
  CHECK(recs.size() == 1);

  // a slightly perturbed start converges to the same solution: still one record
  ScalarField s1(g, s0.values * 1.02);
  recs = multi_start(P, {s0, s1}, cfg);
  CHECK(recs.size() == 1);
}

TEST_CASE("descent from a projected bump never raises the energy") {
  GridSpec g(16, 9.0);
  Problem P(g, ExternalPotential{}, 1.0, Nonlinearity::one_sign(3.0, 1.0), 1.0);
  SolveConfig cfg;
  AutonomousGroundState gs =
      autonomous_ground_state(1.0, Nonlinearity::one_sign(3.0, 1.0), 1.0, RadialGrid(800, 16.0), cfg);
  REQUIRE(gs.converged);
  CutoffSpec cut(4.0);  // support ball of radius T/eps = 4 fits the box
  ScalarField phi = make_phi(P, gs, Vec3::Zero(), cut);
  const double E0 = energy(P, phi);
  SolutionRecord rec = minimize(P, phi, cfg);
  CHECK(rec.energy <= E0 + 1e-12 * std::abs(E0));
}

}  // TEST_SUITE
