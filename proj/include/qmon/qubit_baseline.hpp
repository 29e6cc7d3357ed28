#pragma once

#include "qmon/operator_algebra.hpp"

namespace qmon {

// Qubit reference model: the c-maybe gate U_⊘ = |0⟩⟨0|⊗𝟙 + |1⟩⟨1|⊗σ_θ with
// σ_θ = cosθ σ_x + sinθ σ_z, and its comparison against the d=2 instance of
// the general construction (which matches under θ ↔ π/2−θ).

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator sigma_theta(double theta);

// The 4×4 c-maybe gate on control ⊗ target.
Operator c_maybe(double theta);

// Couple ρ_AB (A = leading qubit, B = rest) to an environment qubit |0⟩
// through c-maybe and trace the environment out; the resulting channel is a
// monitoring of strength ε = 1 − sinθ.
Operator monitored_by_cmaybe(const Operator& rho_AB, double theta);

struct StrengthComparison {
  double eps_cmaybe;    // 1 − sinθ
  double eps_general_t; // 1 − cosθ
};
StrengthComparison compare_with_general_T(double theta);

}  // namespace qmon
