#pragma once

#include "qmon/operator_algebra.hpp"

#include <vector>

namespace qmon {

// The d real phases {φ_l} defining a unitary observable T = Σ_k α_k ZX^k,
// with α_k = (1/d) Σ_l ω^{lk} e^{iφ_l}.
//
// Phases are stored on the canonical branch (−π, π].  The zero-sum condition
// Σ_l φ_l = 0 is enforced modulo 2π: every formula involving the phases
// depends only on e^{iφ_l}, and wrapping a phase onto the canonical branch
// can shift the plain sum by multiples of 2π (e.g. φ = (π, π, …) at the
// branch boundary).
struct PhaseVector {
  int d = 0;
  std::vector<double> phases;

  PhaseVector(int dim, std::vector<double> phi);
  static PhaseVector zero(int dim);
};

// Wrap an angle onto (−π, π].
double canonical_angle(double phi);

// Deviation of x from the nearest multiple of 2π, in [−π, π].
double wrapped_deviation(double x);

// α_k = (1/d) Σ_l ω^{lk} e^{iφ_l}; satisfies Σ_k |α_k|² = 1.
std::vector<Complex> alphas_from_phases(const PhaseVector& p);

struct UnitaryObservable {
  PhaseVector phases;
  Operator matrix;  // T, unitary with T^d = 𝟙
};

UnitaryObservable build_T(const PhaseVector& p);

// ⟨0|(T^j)†T^i|0⟩ in closed form:
//   (1/d) Σ_q exp(i Σ_{m=0}^{[i−j]_d − 1} φ_{[q+m]_d}),
// which is 1 exactly when [i−j]_d = 0.  Valid for any integers i, j.
Complex vacuum_overlap(const PhaseVector& p, long long i, long long j);

// Fourier duality between d-outcome measurements and generalized observables:
//   T^{(i)} = Σ_a ω^{ia} M_a    and    M_a = (1/d) Σ_i ω^{−ia} T^i.
std::vector<Operator> generalized_observables(const std::vector<Operator>& povm);
std::vector<Operator> povm_from_T(const UnitaryObservable& t);

// Inverse Fourier transform of an arbitrary list of generalized observables;
// generalized_observables ∘ povm_from_observables is the identity.
std::vector<Operator> povm_from_observables(const std::vector<Operator>& observables);

}  // namespace qmon
