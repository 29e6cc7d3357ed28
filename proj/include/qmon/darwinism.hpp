#pragma once

#include "qmon/monitoring_maps.hpp"
#include "qmon/unitary_observable.hpp"

#include <stdexcept>
#include <vector>

namespace qmon {

// Total Hilbert-space dimension the dense backend will materialize.
constexpr int kDefaultDimCap = 4096;

class DimensionCapError : public std::runtime_error {
 public:
  explicit DimensionCapError(const std::string& what) : std::runtime_error(what) {}
};

// A homogeneous environment of n qudits, each of dimension phases.d and each
// initialized in |0⟩, interacting with system A (observable `basis`) next to
// a bystander B of dimension d_B.
struct EnvironmentModel {
  PhaseVector phases;
  int n;
  int d_B;
  ObservableBasis basis;

  EnvironmentModel(PhaseVector p, int env_qudits, int dim_B);
  EnvironmentModel(PhaseVector p, int env_qudits, int dim_B, ObservableBasis b);

  int d() const { return phases.d; }
  int system_dim() const { return phases.d * d_B; }
};

// U_{SE} = Σ_j P_j ⊗ T^j with P_j = A_j ⊗ 𝟙_B, acting on H_A⊗H_B⊗H_E.
Operator noisy_cnot(const PhaseVector& phases, const ObservableBasis& basis, int d_B);

// Ω′ = U_{SE_n}…U_{SE_1} (ρ_AB ⊗ |0⟩⟨0|^⊗n) U†… on the full space.
// Throws DimensionCapError when d_A·d_B·d^n exceeds the cap.
Operator evolve_dense(const Operator& rho_AB, const EnvironmentModel& model,
                      int dim_cap = kDefaultDimCap);

// ρ_{SF_m} from the closed form
//   Σ_{ij} P_i ρ P_j ⟨0|(T^j)†T^i|0⟩^{n−m} ⊗ (T^i|0⟩)(T^j|0⟩)†^{⊗m},
// costing O(d² · (d_S d^m)²) regardless of n.
Operator reduced_state_structured(const Operator& rho_AB, const EnvironmentModel& model, int m,
                                  int dim_cap = kDefaultDimCap);

// Tr_E Ω′ = Σ_{ij} P_i ρ P_j ⟨0|(T^j)†T^i|0⟩^n — the system state after n
// interactions, independent of the environment's exponential size.
Operator system_state_after(const Operator& rho_AB, const EnvironmentModel& model);

// I(S:F_m) against fragment size m, plus the after-interaction irreality of
// the system and the effective monitoring strength 1 − η^n.
struct FragmentProfile {
  std::vector<int> m_values;
  std::vector<double> mutual_info;
  double irreality_after = 0.0;
  double effective_epsilon = 0.0;
};

FragmentProfile mutual_info_profile(const Operator& rho_AB, const EnvironmentModel& model,
                                    int m_max, int dim_cap = kDefaultDimCap);

// Both sides of the information-flow identity Δ𝕴_A = Δ(I_{S:E} + I_E) for a
// single interaction, reported for comparison rather than asserted.
struct InfoFlowReport {
  double delta_irreality;
  double delta_info;
};

InfoFlowReport info_flow_check(const Operator& rho_AB, const EnvironmentModel& model);

}  // namespace qmon
