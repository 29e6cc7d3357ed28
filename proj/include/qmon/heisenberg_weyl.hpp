#pragma once

#include "qmon/operator_algebra.hpp"

namespace qmon {

// Heisenberg–Weyl generators of the qudit Pauli group:
//   Z = Σ_k ω^k|k⟩⟨k|,   X = Σ_k |k+1 mod d⟩⟨k|,   ω = e^{2πi/d}.
// For d=2 these are the Pauli σ_z and σ_x.

void check_dimension(int d);  // throws unless d >= 2

// ω^power, computed from the exact angle 2π·(power mod d)/d so phases do
// not drift for large exponents.
Complex omega(int d, long long power = 1);

Operator clock_Z(int d);
Operator shift_X(int d);

// V = (1/√d) Σ_{ij} ω^{ij}|i⟩⟨j|.  V†ZV = X and V†XV = Z⁻¹, so conjugation
// by V carries the {ZX^k} family into the {XZ^{-k}} family.
Operator fourier_V(int d);

// A^k with k reduced into [0, d) first; valid for operators of order d.
Operator operator_power(const Operator& a, int d, long long k);

}  // namespace qmon
