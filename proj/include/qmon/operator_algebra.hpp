#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qmon {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Validation tolerances for density matrices.
constexpr double kHermitianTol = 1e-9;
constexpr double kTraceTol = 1e-9;
// Eigenvalues in [kEigenvalueFloor, 0) are rounding noise and get clamped to 0;
// anything below kEigenvalueFloor is an invalid state, not noise.
constexpr double kEigenvalueFloor = -1e-10;

// Ordered subsystem dimensions giving meaning to tensor indices.
// The leftmost factor is the slowest-varying (most significant) index:
// system A first, then B, then E_1…E_n.
struct DimensionLayout {
  std::vector<int> dims;

  DimensionLayout() = default;
  DimensionLayout(std::initializer_list<int> ds);
  explicit DimensionLayout(std::vector<int> ds);

  int total() const;
  int factor_count() const { return static_cast<int>(dims.size()); }
};

// Kronecker product of all factors, leftmost factor most significant.
Operator tensor(const std::vector<Operator>& factors);

// Trace out every factor not in `keep`; kept factors stay in layout order.
Operator partial_trace(const Operator& state, const DimensionLayout& layout,
                       const std::vector<int>& keep);

// S(ρ) = −Tr(ρ log₂ ρ), from the eigenvalues with 0·log0 ≡ 0.  Bits.
double von_neumann_entropy(const Operator& state);

// ½‖a−b‖₁ via the eigenvalues of a−b.  Both inputs must be Hermitian.
double trace_distance(const Operator& a, const Operator& b);

// ρ = GG†/Tr(GG†) with G a dim×rank complex Gaussian matrix.
// Deterministic per seed.
Operator random_density(int dim, int rank, std::uint64_t seed);

bool is_hermitian(const Operator& a, double tol = kHermitianTol);

// Throws std::invalid_argument unless ρ is square, Hermitian within tol,
// unit trace within tol, and has eigenvalues ≥ kEigenvalueFloor.
void validate_density(const Operator& rho, double tol = kHermitianTol);

// Eigenvalues of a valid density matrix, ascending, clamped to [0, ∞).
Eigen::VectorXd density_eigenvalues(const Operator& rho);

// Counter-based sub-seeding: one master seed, independent streams.
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace qmon
