#include "qmon/qubit_baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace qmon {

Operator pauli_x() {
  Operator x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Operator pauli_y() {
  Operator y(2, 2);
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return y;
}

Operator pauli_z() {
  Operator z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Operator sigma_theta(double theta) {
  return std::cos(theta) * pauli_x() + std::sin(theta) * pauli_z();
}

Operator c_maybe(double theta) {
  const Operator st = sigma_theta(theta);
  Operator u = Operator::Zero(4, 4);
  u.block(0, 0, 2, 2) = Operator::Identity(2, 2);
  u.block(2, 2, 2, 2) = st;
  return u;
}

Operator monitored_by_cmaybe(const Operator& rho_AB, double theta) {
  if (rho_AB.rows() != rho_AB.cols() || rho_AB.rows() % 2 != 0 || rho_AB.rows() < 2) {
    throw std::invalid_argument("monitored_by_cmaybe: system A must be a qubit");
  }
  const int d_b = static_cast<int>(rho_AB.rows()) / 2;

  // U_⊘ on A ⊗ B ⊗ E: Σ_k (A_k ⊗ 𝟙_B) ⊗ σ_θ^k.
  const Operator id_b = Operator::Identity(d_b, d_b);
  const Operator id_2 = Operator::Identity(2, 2);
  Operator p0 = Operator::Zero(2, 2);
  p0(0, 0) = 1.0;
  Operator p1 = Operator::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Operator u = tensor({p0, id_b, id_2}) + tensor({p1, id_b, sigma_theta(theta)});

  Operator env0 = Operator::Zero(2, 2);
  env0(0, 0) = 1.0;
  const Operator evolved = u * tensor({rho_AB, env0}) * u.adjoint();
  return partial_trace(evolved, DimensionLayout{2, d_b, 2}, {0, 1});
}

StrengthComparison compare_with_general_T(double theta) {
  return StrengthComparison{1.0 - std::sin(theta), 1.0 - std::cos(theta)};
}

}  // namespace qmon
