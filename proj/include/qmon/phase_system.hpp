#pragma once

#include "qmon/unitary_observable.hpp"

#include <cstdint>

namespace qmon {

// Monitoring noise η ∈ [0,1], the complement of the monitoring intensity.
struct NoiseLevel {
  double eta;
  explicit NoiseLevel(double value);  // validates [−1e−9, 1+1e−9], clamps to [0,1]
};

// Raw value of η = (1/d) Σ_q cos φ_q, without range validation.  Meaningful
// as a noise level only when the phases satisfy the constraint system.
double nominal_eta(const PhaseVector& p);

// Same formula, validated and clamped into [0,1]; throws std::domain_error
// when the value is negative beyond 1e−9.
NoiseLevel eta_from_phases(const PhaseVector& p);

// Residuals of the transcendental system a valid monitoring generator must
// satisfy, as a vector of length 1 + (d−1) + (d−2):
//   [0]        zero-sum of phases (wrapped deviation from a multiple of 2π)
//   [1..d−1]   Σ_q sin(Σ_{m=0}^{p} φ_{[q+m]_d}) for p = 0…d−2
//   [d..2d−3]  cosine-sum differences against the p=0 sum, for p = 1…d−2
// All-zero iff p solves the system exactly.
Eigen::VectorXd residuals(const PhaseVector& p);

// The closed solution family φ_0 = θ, φ_1 = −θ, φ_{k≥2} = 0, valid for every
// d ≥ 2; its noise level is (d − 2 + 2cosθ)/d.
PhaseVector analytic_phases(int d, double theta);

struct SolverReport {
  PhaseVector phases;
  double residual_norm = 0.0;  // 2-norm of residuals(phases)
  double achieved_eta = 0.0;   // nominal_eta(phases); may sit outside [0,1] on failure
  int iterations = 0;          // total descent iterations across restarts
  std::uint64_t seed = 0;
  bool found = false;
  int restarts_used = 0;
};

struct SolverOptions {
  double residual_tol = 1e-10;
  double eta_tol = 1e-8;
  int max_restarts = 50;
  int max_iterations_per_start = 250;
};

// Finds phases with residual_norm ≤ residual_tol and |η − target| ≤ eta_tol by
// damped least-squares descent over the d−1 free phases, multistarting from
// deterministic guesses and then a seeded uniform stream.  A miss after the
// restart budget is reported via found = false, not an exception.
SolverReport solve_phases(int d, NoiseLevel target_eta, std::uint64_t seed,
                          const SolverOptions& options = {});

}  // namespace qmon
