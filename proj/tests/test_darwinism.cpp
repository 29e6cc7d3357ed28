#include "qmon/darwinism.hpp"

#include "qmon/heisenberg_weyl.hpp"
#include "qmon/phase_system.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qmon;
using namespace qmon::test;

namespace {

constexpr double kPi = std::numbers::pi;

// theta reaching a given eta within the analytic family, eta = (d-2+2cos)/d.
double analytic_theta(int d, double eta) { return std::acos((d * eta - d + 2.0) / 2.0); }

}  // namespace

TEST_CASE("noisy_cnot: zero phases give the controlled clock and no disturbance") {
  const PhaseVector p = PhaseVector::zero(3);
  const ObservableBasis basis = ObservableBasis::computational(3);
  const Operator u = noisy_cnot(p, basis, 1);
  Operator expect = Operator::Zero(9, 9);
  for (int j = 0; j < 3; ++j) {
    expect.block(3 * j, 3 * j, 3, 3) = operator_power(clock_Z(3), 3, j);
  }
  CHECK(max_abs_diff(u, expect) < 1e-13);

  // Induced system channel is the identity (eta = 1).
  const Operator rho = random_density(3, 2, 4);
  const EnvironmentModel model(p, 1, 1);
  const Operator after = partial_trace(evolve_dense(rho, model), DimensionLayout{3, 1, 3}, {0, 1});
  CHECK(trace_distance(after, rho) < 1e-12);
}

TEST_CASE("noisy_cnot: qutrit noiseless gate matches the explicit block form") {
  const PhaseVector p(3, {2.0 * kPi / 3.0, -2.0 * kPi / 3.0, 0.0});
  const Operator u = noisy_cnot(p, ObservableBasis::computational(3), 1);
  const Operator z = clock_Z(3);
  const Operator x = shift_X(3);
  Operator expect = Operator::Zero(9, 9);
  expect.block(0, 0, 3, 3) = Operator::Identity(3, 3);
  expect.block(3, 3, 3, 3) = omega(3) * (z * x * x);
  expect.block(6, 6, 3, 3) = z * z * x;
  CHECK(max_abs_diff(u, expect) < 1e-13);
}

TEST_CASE("noisy_cnot: d=2 analytic phases induce strength eps = 1 - cos(theta)") {
  // One interaction through T at angle theta monitors with eps = 1 - cos(theta).
  const double theta = 0.9;
  const Operator rho = random_density(2, 2, 8);
  const EnvironmentModel model(analytic_phases(2, theta), 1, 1);
  const Operator after = partial_trace(evolve_dense(rho, model), DimensionLayout{2, 1, 2}, {0, 1});
  const MonitoringSpec spec(ObservableBasis::computational(2), 1.0 - std::cos(theta));
  CHECK(trace_distance(after, monitor(rho, spec, DimensionLayout{2, 1})) < 1e-12);
}

TEST_CASE("noisy_cnot: unitary for solved phases across dimensions") {
  for (int d : {2, 3, 4, 5}) {
    const SolverReport report = solve_phases(d, NoiseLevel(0.4), 9);
    REQUIRE(report.found);
    const Operator u = noisy_cnot(report.phases, ObservableBasis::computational(d), 2);
    CHECK(max_abs_diff(u * u.adjoint(), Operator::Identity(u.rows(), u.cols())) < 1e-10);
  }
}

TEST_CASE("evolve_dense: n=0 leaves the state untouched") {
  const Operator rho = random_density(6, 3, 10);
  const EnvironmentModel model(analytic_phases(3, 1.0), 0, 2);
  CHECK(max_abs_diff(evolve_dense(rho, model), rho) == 0.0);
}

TEST_CASE("evolve_dense: single interaction induces the monitoring map") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const double theta = 0.3 + 0.35 * seed;  // stays inside the eta >= 0 branch
    const PhaseVector p = analytic_phases(3, theta);
    const double eta = nominal_eta(p);
    const Operator rho = random_density(6, 4, 40 + seed);
    const EnvironmentModel model(p, 1, 2);
    const Operator after =
        partial_trace(evolve_dense(rho, model), DimensionLayout{3, 2, 3}, {0, 1});
    const MonitoringSpec spec(ObservableBasis::computational(3), 1.0 - eta);
    CHECK(trace_distance(after, monitor(rho, spec, DimensionLayout{3, 2})) < 1e-11);
  }
}

TEST_CASE("evolve_dense: matches the closed-form global state") {
  const PhaseVector p = analytic_phases(3, 1.2);
  const Operator rho = random_density(3, 2, 12);
  const EnvironmentModel model(p, 2, 1);
  const Operator dense = evolve_dense(rho, model);

  // Independent assembly of sum_ij P_i rho P_j (x) (T^i|0><0|T^j)^{(x)2}.
  const Operator t = build_T(p).matrix;
  Vector ket0 = Vector::Zero(3);
  ket0[0] = 1.0;
  Operator expect = Operator::Zero(27, 27);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Operator pi = ket_projector(3, i);
      const Operator pj = ket_projector(3, j);
      Vector vi = ket0, vj = ket0;
      for (int k = 0; k < i; ++k) vi = t * vi;
      for (int k = 0; k < j; ++k) vj = t * vj;
      const Operator env = vi * vj.adjoint();
      expect += tensor({pi * rho * pj, env, env});
    }
  }
  CHECK(max_abs_diff(dense, expect) < 1e-12);
}

TEST_CASE("evolve_dense: perfect record relabels basis states") {
  const PhaseVector p(3, {2.0 * kPi / 3.0, -2.0 * kPi / 3.0, 0.0});
  const Operator t = build_T(p).matrix;
  Vector ket0 = Vector::Zero(3);
  ket0[0] = 1.0;

  std::vector<Vector> pointer(3);
  pointer[0] = ket0;
  for (int i = 1; i < 3; ++i) pointer[i] = t * pointer[i - 1];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j) {
      CHECK(std::abs(pointer[j].dot(pointer[i])) < 1e-10);  // orthogonal records
    }
  }

  for (int k = 0; k < 3; ++k) {
    const EnvironmentModel model(p, 1, 1);
    const Operator after = evolve_dense(ket_projector(3, k), model);
    const Operator expect = tensor({ket_projector(3, k), Operator(pointer[k] * pointer[k].adjoint())});
    CHECK(max_abs_diff(after, expect) < 1e-12);
  }
}

TEST_CASE("evolve_dense: enforces the dimension cap") {
  const Operator rho = random_density(3, 1, 1);
  const EnvironmentModel big(analytic_phases(3, 1.0), 8, 1);  // 3^9 = 19683 > 4096
  CHECK_THROWS_AS(evolve_dense(rho, big), DimensionCapError);
  const EnvironmentModel small(analytic_phases(3, 1.0), 2, 1);  // total 27
  CHECK_THROWS_AS(evolve_dense(rho, small, 10), DimensionCapError);
  CHECK_NOTHROW(evolve_dense(rho, small));
}

TEST_CASE("structured backend: m=n equals the dense evolution") {
  const PhaseVector p = analytic_phases(2, 0.8);
  const Operator rho = random_density(4, 3, 15);
  const EnvironmentModel model(p, 3, 2);
  const Operator dense = evolve_dense(rho, model);
  const Operator structured = reduced_state_structured(rho, model, 3);
  CHECK(trace_distance(structured, dense) < 1e-11);
}

TEST_CASE("structured backend: m=0 reproduces the effective monitoring") {
  const PhaseVector p = analytic_phases(3, 0.9);
  const double eta = nominal_eta(p);
  const Operator rho = random_density(6, 2, 16);
  const EnvironmentModel model(p, 4, 2);
  const Operator reduced = reduced_state_structured(rho, model, 0);
  const MonitoringSpec spec(ObservableBasis::computational(3),
                            1.0 - std::pow(eta, 4.0));
  CHECK(trace_distance(reduced, monitor(rho, spec, DimensionLayout{3, 2})) < 1e-11);
}

TEST_CASE("structured backend: d=3 n=6 fragment agrees with the dense oracle") {
  const PhaseVector p = analytic_phases(3, 1.4);
  const Operator rho = random_density(3, 3, 17);
  const EnvironmentModel model(p, 6, 1);
  const Operator dense_full = evolve_dense(rho, model, 4096);  // dim 3^7 = 2187
  std::vector<int> dims{3, 1};
  for (int k = 0; k < 6; ++k) dims.push_back(3);
  const Operator dense_frag = partial_trace(dense_full, DimensionLayout(dims), {0, 1, 2, 3});
  const Operator structured = reduced_state_structured(rho, model, 2);
  CHECK(trace_distance(structured, dense_frag) < 1e-9);
}

TEST_CASE("backend equivalence sweep: d <= 3, n <= 5, all fragments") {
  for (int d : {2, 3}) {
    const PhaseVector p = analytic_phases(d, 0.7);
    for (int n = 1; n <= 5; ++n) {
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const Operator rho = random_density(d, d, 60 + seed);
        const EnvironmentModel model(p, n, 1);
        const Operator dense_full = evolve_dense(rho, model);
        std::vector<int> dims{d, 1};
        for (int k = 0; k < n; ++k) dims.push_back(d);
        for (int m = 0; m <= n; ++m) {
          std::vector<int> keep{0, 1};
          for (int k = 0; k < m; ++k) keep.push_back(2 + k);
          const Operator dense_frag = partial_trace(dense_full, DimensionLayout(dims), keep);
          const Operator structured = reduced_state_structured(rho, model, m);
          CHECK(trace_distance(structured, dense_frag) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("system_state_after: effective-noise law against monitor_repeated") {
  const PhaseVector p = analytic_phases(3, analytic_theta(3, 0.6));
  const Operator rho = random_density(6, 4, 19);
  const DimensionLayout layout{3, 2};
  for (int n : {0, 1, 2, 5, 9}) {
    const EnvironmentModel model(p, n, 2);
    const Operator closed = system_state_after(rho, model);
    const MonitoringSpec spec(ObservableBasis::computational(3), 1.0 - 0.6);
    CHECK(trace_distance(closed, monitor_repeated(rho, spec, n, layout)) < 1e-10);
  }
}

TEST_CASE("system_state_after: full noise is a fixed point for every n") {
  const Operator rho = random_density(4, 2, 20);
  for (int n : {1, 7, 50}) {
    const EnvironmentModel model(PhaseVector::zero(2), n, 2);
    CHECK(trace_distance(system_state_after(rho, model), rho) < 1e-13);
  }
}

TEST_CASE("system_state_after: n=1 equals the dense single-qudit evolution") {
  const SolverReport report = solve_phases(4, NoiseLevel(0.35), 23);
  REQUIRE(report.found);
  const Operator rho = random_density(4, 3, 21);
  const EnvironmentModel model(report.phases, 1, 1);
  const Operator dense =
      partial_trace(evolve_dense(rho, model), DimensionLayout{4, 1, 4}, {0, 1});
  CHECK(trace_distance(system_state_after(rho, model), dense) < 1e-11);
}

TEST_CASE("system_state_after: converges to the dephased state at rate eta^n") {
  const ObservableBasis basis3 = ObservableBasis::computational(3);
  const Operator rho = random_density(3, 3, 22);
  const DimensionLayout layout{3, 1};
  for (double eta : {0.3, 0.6, 0.9}) {
    const PhaseVector p = analytic_phases(3, analytic_theta(3, eta));
    const Operator fixed = dephase(rho, basis3, layout);
    double prev = 1.0;
    for (int n = 0; n <= 40; n += 4) {
      const EnvironmentModel model(p, n, 1);
      const double dist = trace_distance(system_state_after(rho, model), fixed);
      CHECK(dist <= 3.0 * std::pow(eta, n) + 1e-9);
      CHECK(dist <= prev + 1e-12);
      prev = dist;
    }
  }
}

TEST_CASE("system_state_after: large n reaches realism below the damping bound") {
  const PhaseVector p = analytic_phases(2, analytic_theta(2, 0.9));
  const Operator rho = random_density(2, 2, 24);
  const EnvironmentModel model(p, 200, 1);
  const Operator fixed = dephase(rho, ObservableBasis::computational(2), DimensionLayout{2, 1});
  CHECK(trace_distance(system_state_after(rho, model), fixed) <=
        std::pow(0.9, 200.0) + 1e-9);
}

TEST_CASE("global state stays unit trace and positive under evolution") {
  const SolverReport report = solve_phases(3, NoiseLevel(0.5), 31);
  REQUIRE(report.found);
  const Operator rho = random_density(6, 5, 25);
  const EnvironmentModel model(report.phases, 2, 2);
  const Operator omega_after = evolve_dense(rho, model);
  CHECK(std::abs(omega_after.trace().real() - 1.0) < 1e-12);
  CHECK_NOTHROW(validate_density(omega_after));
}

TEST_CASE("mutual_info_profile: dephased product state keeps zero irreality") {
  const ObservableBasis basis = ObservableBasis::computational(3);
  const DimensionLayout layout{3, 2};
  const Operator rho = dephase(tensor({random_density(3, 2, 26), random_density(2, 2, 27)}),
                               basis, layout);
  const EnvironmentModel model(analytic_phases(3, 1.1), 3, 2);
  const FragmentProfile profile = mutual_info_profile(rho, model, 3);
  CHECK(profile.irreality_after < 1e-10);
  CHECK(profile.mutual_info.front() == 0.0);
}

TEST_CASE("mutual_info_profile: noiseless pure superposition saturates at 2 S(dephased)") {
  const PhaseVector p(3, {2.0 * kPi / 3.0, -2.0 * kPi / 3.0, 0.0});
  const Operator rho = uniform_superposition(3);
  const EnvironmentModel model(p, 1, 1);
  const FragmentProfile profile = mutual_info_profile(rho, model, 1);
  const double s_dephased = von_neumann_entropy(
      dephase(rho, ObservableBasis::computational(3), DimensionLayout{3, 1}));
  CHECK(profile.mutual_info[1] == doctest::Approx(2.0 * s_dephased).epsilon(1e-10));
}

TEST_CASE("mutual_info_profile: monotone in fragment size") {
  const SolverReport report = solve_phases(3, NoiseLevel(0.5), 37);
  REQUIRE(report.found);
  const Operator rho = random_density(3, 2, 28);
  const EnvironmentModel model(report.phases, 4, 1);
  const FragmentProfile profile = mutual_info_profile(rho, model, 4);
  for (std::size_t i = 1; i < profile.mutual_info.size(); ++i) {
    CHECK(profile.mutual_info[i] >= profile.mutual_info[i - 1] - 1e-10);
  }
  CHECK(profile.effective_epsilon ==
        doctest::Approx(1.0 - std::pow(report.achieved_eta, 4.0)).epsilon(1e-12));
}

TEST_CASE("info_flow_check: dephased input moves nothing") {
  const ObservableBasis basis = ObservableBasis::computational(2);
  const Operator rho = dephase(random_density(2, 2, 29), basis, DimensionLayout{2, 1});
  const EnvironmentModel model(analytic_phases(2, 0.8), 1, 1);
  const InfoFlowReport flow = info_flow_check(rho, model);
  CHECK(std::abs(flow.delta_irreality) < 1e-10);
  CHECK(std::abs(flow.delta_info) < 1e-10);
}

TEST_CASE("info_flow_check: noiseless qubit superposition moves one bit") {
  const PhaseVector p = analytic_phases(2, kPi / 2.0);  // eta = 0
  const EnvironmentModel model(p, 1, 1);
  const InfoFlowReport flow = info_flow_check(uniform_superposition(2), model);
  CHECK(flow.delta_irreality == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(flow.delta_info == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("info_flow_check: both sides agree on random states") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const PhaseVector p = analytic_phases(d, 0.5 + 0.1 * (seed % 5));
    const Operator rho = random_density(d, 1 + seed % d, 700 + seed);
    const EnvironmentModel model(p, 1, 1);
    const InfoFlowReport flow = info_flow_check(rho, model);
    CHECK(std::abs(flow.delta_irreality - flow.delta_info) < 1e-10);
  }
}

TEST_CASE("info_flow_check: requires n=1") {
  const EnvironmentModel model(analytic_phases(2, 0.5), 2, 1);
  CHECK_THROWS_AS(info_flow_check(random_density(2, 1, 1), model), std::invalid_argument);
}

TEST_CASE("reduced_state_structured: rejects fragments outside [0, n]") {
  const EnvironmentModel model(analytic_phases(2, 0.5), 3, 1);
  const Operator rho = random_density(2, 1, 2);
  CHECK_THROWS_AS(reduced_state_structured(rho, model, -1), std::invalid_argument);
  CHECK_THROWS_AS(reduced_state_structured(rho, model, 4), std::invalid_argument);
  CHECK_THROWS_AS(mutual_info_profile(rho, model, 4), std::invalid_argument);
}
