#include "qmon/phase_system.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qmon;
using namespace qmon::test;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("residuals: analytic family solves the system for d = 2..7") {
  for (int d = 2; d <= 7; ++d) {
    for (double theta : {0.0, 0.4, 1.3, 2.2, 3.0}) {
      CHECK(residuals(analytic_phases(d, theta)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("residuals: zero phases solve the system with full noise") {
  const PhaseVector p = PhaseVector::zero(4);
  CHECK(residuals(p).cwiseAbs().maxCoeff() == 0.0);
  CHECK(nominal_eta(p) == 1.0);
}

TEST_CASE("residuals: generic zero-sum phases violate the sine constraints") {
  std::mt19937_64 rng = seeded_rng(2024, 0);
  std::uniform_real_distribution<double> uniform(-kPi, kPi);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> phi(4);
    double sum = 0.0;
    for (int l = 0; l < 3; ++l) {
      phi[l] = uniform(rng);
      sum += phi[l];
    }
    phi[3] = -sum;
    worst = std::max(worst, residuals(PhaseVector(4, phi)).cwiseAbs().maxCoeff());
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("residuals: vector length is 1 + (d-1) + (d-2)") {
  for (int d = 2; d <= 6; ++d) {
    CHECK(residuals(PhaseVector::zero(d)).size() == 2 * d - 2);
  }
}

TEST_CASE("eta: qutrit analytic family follows (1 + 2cos theta)/3") {
  for (int k = 0; k < 100; ++k) {
    // theta in [0, 2pi/3], the branch where the noise stays nonnegative
    const double theta = (2.0 * kPi / 3.0) * k / 99.0;
    const double expect = (1.0 + 2.0 * std::cos(theta)) / 3.0;
    CHECK(std::abs(eta_from_phases(analytic_phases(3, theta)).eta - expect) < 1e-14);
  }
}

TEST_CASE("eta: noiseless qutrit point at theta = 2pi/3") {
  CHECK(eta_from_phases(analytic_phases(3, 2.0 * kPi / 3.0)).eta < 1e-15);
}

TEST_CASE("eta: zero phases give eta = 1") {
  CHECK(eta_from_phases(PhaseVector::zero(6)).eta == 1.0);
}

TEST_CASE("eta: negative values beyond tolerance are rejected") {
  // Qutrit family at theta = pi has nominal eta = -1/3.
  CHECK(nominal_eta(analytic_phases(3, kPi)) == doctest::Approx(-1.0 / 3.0));
  CHECK_THROWS_AS(eta_from_phases(analytic_phases(3, kPi)), std::domain_error);
}

TEST_CASE("analytic_phases: residual stays below 1e-12 on a theta grid, d <= 8") {
  for (int d = 2; d <= 8; ++d) {
    for (int k = 0; k < 100; ++k) {
      const double theta = 2.0 * kPi * k / 100.0;
      CHECK(residuals(analytic_phases(d, theta)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("analytic_phases: d=2 endpoints") {
  CHECK(nominal_eta(analytic_phases(2, kPi / 2.0)) < 1e-15);  // eta = cos(pi/2)
  const PhaseVector flat = analytic_phases(5, 0.0);
  for (double phi : flat.phases) CHECK(phi == 0.0);
  CHECK(nominal_eta(flat) == 1.0);
}

TEST_CASE("solve_phases: qutrit target 0.5 matches the analytic witness") {
  const SolverReport report = solve_phases(3, NoiseLevel(0.5), 1);
  REQUIRE(report.found);
  CHECK(report.residual_norm <= 1e-10);
  CHECK(std::abs(report.achieved_eta - 0.5) <= 1e-8);
  // One known witness: theta = arccos(1/4) in the analytic family.
  CHECK(residuals(analytic_phases(3, std::acos(0.25))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("solve_phases: noiseless solutions exist at d=4") {
  const SolverReport report = solve_phases(4, NoiseLevel(0.0), 1);
  REQUIRE(report.found);
  CHECK(report.residual_norm < 1e-10);
  CHECK(std::abs(report.achieved_eta) <= 1e-8);
}

TEST_CASE("solve_phases: d=2 solutions have cos(phi_0) = eta") {
  const SolverReport report = solve_phases(2, NoiseLevel(0.3), 5);
  REQUIRE(report.found);
  CHECK(std::abs(std::cos(report.phases.phases[0]) - 0.3) < 1e-8);
  CHECK(std::abs(wrapped_deviation(report.phases.phases[0] + report.phases.phases[1])) < 1e-12);
}

TEST_CASE("solve_phases: full-noise target accepted immediately") {
  const SolverReport report = solve_phases(5, NoiseLevel(1.0), 3);
  REQUIRE(report.found);
  CHECK(report.restarts_used == 1);
  for (double phi : report.phases.phases) CHECK(std::abs(phi) < 1e-8);
}

TEST_CASE("solve_phases: deterministic per seed") {
  const SolverReport a = solve_phases(4, NoiseLevel(0.45), 17);
  const SolverReport b = solve_phases(4, NoiseLevel(0.45), 17);
  REQUIRE(a.found);
  REQUIRE(b.found);
  for (int l = 0; l < 4; ++l) CHECK(a.phases.phases[l] == b.phases.phases[l]);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("solve_phases: grid of targets for d in {4,5,6,7}") {
  // The indicative slice of the existence sweep; the acceptance suite
  // runs the full 11-point grid.
  for (int d : {4, 5, 6, 7}) {
    for (double target : {0.0, 0.3, 0.8}) {
      const SolverReport report = solve_phases(d, NoiseLevel(target), 2);
      REQUIRE_MESSAGE(report.found, "d=" << d << " target=" << target);
      CHECK(report.residual_norm <= 1e-10);
      CHECK(std::abs(report.achieved_eta - target) <= 1e-8);
    }
  }
}

TEST_CASE("solve_phases: rejects invalid targets and tolerances") {
  CHECK_THROWS_AS(NoiseLevel(1.5), std::domain_error);
  CHECK_THROWS_AS(NoiseLevel(-0.2), std::domain_error);
  SolverOptions bad;
  bad.residual_tol = 0.0;
  CHECK_THROWS_AS(solve_phases(3, NoiseLevel(0.5), 1, bad), std::invalid_argument);
}

TEST_CASE("solve_phases: an exhausted restart budget reports a miss, not a throw") {
  SolverOptions starved;
  starved.max_restarts = 1;             // only the full-noise warm start
  starved.max_iterations_per_start = 1;
  const SolverReport report = solve_phases(5, NoiseLevel(0.37), 13, starved);
  CHECK_FALSE(report.found);
  CHECK(report.restarts_used == 1);
  // Best-so-far candidate is still reported for inspection.
  CHECK(report.phases.d == 5);
}
