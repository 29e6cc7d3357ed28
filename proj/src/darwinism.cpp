#include "qmon/darwinism.hpp"

#include "qmon/heisenberg_weyl.hpp"
#include "qmon/phase_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmon {

namespace {

constexpr double kUnitaryTol = 1e-9;

void check_cap(long long total, int dim_cap, const char* what) {
  if (total > dim_cap) {
    throw DimensionCapError(std::string(what) + ": total dimension " + std::to_string(total) +
                            " exceeds cap " + std::to_string(dim_cap));
  }
}

void check_system_state(const Operator& rho_AB, const EnvironmentModel& model) {
  if (rho_AB.rows() != rho_AB.cols() || rho_AB.rows() != model.system_dim()) {
    throw std::invalid_argument("system state dimension does not match model d_A*d_B");
  }
}

// z^k for integer k >= 0 with z^0 = 1 exactly, safe at z = 0.
Complex complex_int_pow(Complex z, long long k) {
  Complex out(1.0, 0.0);
  while (k > 0) {
    if (k & 1) out *= z;
    z *= z;
    k >>= 1;
  }
  return out;
}

// P_i ρ P_j blocks for all (i,j), with P_i = A_i ⊗ 𝟙_B.
std::vector<std::vector<Operator>> sandwich_blocks(const Operator& rho_AB,
                                                   const EnvironmentModel& model) {
  const int d = model.d();
  const Operator id_b = Operator::Identity(model.d_B, model.d_B);
  std::vector<Operator> lifted(d);
  for (int i = 0; i < d; ++i) lifted[i] = tensor({model.basis.projectors[i], id_b});
  std::vector<std::vector<Operator>> blocks(d, std::vector<Operator>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) blocks[i][j] = lifted[i] * rho_AB * lifted[j];
  }
  return blocks;
}

std::vector<Operator> t_powers(const Operator& t, int d) {
  std::vector<Operator> pows(d);
  pows[0] = Operator::Identity(d, d);
  for (int j = 1; j < d; ++j) pows[j] = pows[j - 1] * t;
  return pows;
}

// state ↦ (gate ⊗ 𝟙_rest) · state, with the gate acting on layout factors
// f1 and f2 only.  Column-by-column gather/scatter keeps the cost at
// O(N² · d1·d2) instead of materializing the lifted unitary.
Operator apply_gate_left(const Operator& state, const DimensionLayout& layout, int f1, int f2,
                         const Operator& gate) {
  const int nf = layout.factor_count();
  const int d1 = layout.dims[f1];
  const int d2 = layout.dims[f2];
  const int g = d1 * d2;
  std::vector<long long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * layout.dims[f + 1];

  std::vector<long long> other_offsets{0};
  for (int f = 0; f < nf; ++f) {
    if (f == f1 || f == f2) continue;
    std::vector<long long> next;
    next.reserve(other_offsets.size() * layout.dims[f]);
    for (long long base : other_offsets) {
      for (int v = 0; v < layout.dims[f]; ++v) next.push_back(base + v * stride[f]);
    }
    other_offsets = std::move(next);
  }

  std::vector<long long> site_offset(g);
  for (int a = 0; a < d1; ++a) {
    for (int e = 0; e < d2; ++e) site_offset[a * d2 + e] = a * stride[f1] + e * stride[f2];
  }

  Operator out(state.rows(), state.cols());
  Eigen::VectorXcd in_col(g), out_col(g);
  for (Eigen::Index c = 0; c < state.cols(); ++c) {
    for (long long base : other_offsets) {
      for (int s = 0; s < g; ++s) in_col[s] = state(base + site_offset[s], c);
      out_col.noalias() = gate * in_col;
      for (int s = 0; s < g; ++s) out(base + site_offset[s], c) = out_col[s];
    }
  }
  return out;
}

// state ↦ U state U† with U = gate on factors (f1, f2), identity elsewhere.
Operator conjugate_by_gate(const Operator& state, const DimensionLayout& layout, int f1, int f2,
                           const Operator& gate) {
  const Operator y = apply_gate_left(state, layout, f1, f2, gate);
  return apply_gate_left(y.adjoint(), layout, f1, f2, gate).adjoint();
}

}  // namespace

EnvironmentModel::EnvironmentModel(PhaseVector p, int env_qudits, int dim_B)
    : EnvironmentModel(PhaseVector(p), env_qudits, dim_B,
                       ObservableBasis::computational(p.d)) {}

EnvironmentModel::EnvironmentModel(PhaseVector p, int env_qudits, int dim_B, ObservableBasis b)
    : phases(std::move(p)), n(env_qudits), d_B(dim_B), basis(std::move(b)) {
  if (n < 0) throw std::invalid_argument("EnvironmentModel: n must be >= 0");
  if (d_B < 1) throw std::invalid_argument("EnvironmentModel: d_B must be >= 1");
  if (basis.d != phases.d) {
    throw std::invalid_argument("EnvironmentModel: observable dimension must equal phases.d");
  }
}

Operator noisy_cnot(const PhaseVector& phases, const ObservableBasis& basis, int d_B) {
  if (d_B < 1) throw std::invalid_argument("noisy_cnot: d_B must be >= 1");
  if (basis.d != phases.d) {
    throw std::invalid_argument("noisy_cnot: observable dimension must equal phases.d");
  }
  const int d = phases.d;
  const std::vector<Operator> pows = t_powers(build_T(phases).matrix, d);
  const Operator id_b = Operator::Identity(d_B, d_B);
  Operator u = Operator::Zero(d * d_B * d, d * d_B * d);
  for (int j = 0; j < d; ++j) u += tensor({basis.projectors[j], id_b, pows[j]});
  const double residual =
      (u * u.adjoint() - Operator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (residual > kUnitaryTol) {
    throw std::runtime_error("noisy_cnot: unitarity residual " + std::to_string(residual));
  }
  return u;
}

Operator evolve_dense(const Operator& rho_AB, const EnvironmentModel& model, int dim_cap) {
  check_system_state(rho_AB, model);
  const int d = model.d();
  long long total = model.system_dim();
  for (int k = 0; k < model.n; ++k) total *= d;
  check_cap(total, dim_cap, "evolve_dense");

  if (model.n == 0) return rho_AB;

  Operator ket0 = Operator::Zero(d, d);
  ket0(0, 0) = 1.0;
  std::vector<Operator> factors{rho_AB};
  for (int k = 0; k < model.n; ++k) factors.push_back(ket0);
  Operator omega = tensor(factors);

  // Two-site form of U_{SE} = Σ_j A_j ⊗ T^j, applied on (A, E_k) in turn;
  // B and the other environment qudits are untouched.
  const std::vector<Operator> pows = t_powers(build_T(model.phases).matrix, d);
  Operator gate = Operator::Zero(d * d, d * d);
  for (int j = 0; j < d; ++j) gate += tensor({model.basis.projectors[j], pows[j]});

  std::vector<int> dims{d, model.d_B};
  for (int k = 0; k < model.n; ++k) dims.push_back(d);
  const DimensionLayout layout(dims);
  for (int k = 0; k < model.n; ++k) {
    omega = conjugate_by_gate(omega, layout, 0, 2 + k, gate);
  }
  return omega;
}

Operator reduced_state_structured(const Operator& rho_AB, const EnvironmentModel& model, int m,
                                  int dim_cap) {
  check_system_state(rho_AB, model);
  if (m < 0 || m > model.n) throw std::invalid_argument("reduced_state_structured: m out of range");
  const int d = model.d();
  long long total = model.system_dim();
  for (int k = 0; k < m; ++k) total *= d;
  check_cap(total, dim_cap, "reduced_state_structured");

  const std::vector<std::vector<Operator>> blocks = sandwich_blocks(rho_AB, model);

  // Pointer states T^i|0⟩ and their m-fold tensor powers.
  const Operator t = build_T(model.phases).matrix;
  std::vector<Vector> pointer(d);
  pointer[0] = Vector::Zero(d);
  pointer[0][0] = 1.0;
  for (int i = 1; i < d; ++i) pointer[i] = t * pointer[i - 1];

  const int env_dim = static_cast<int>(total) / model.system_dim();
  std::vector<Vector> pointer_m(d);
  for (int i = 0; i < d; ++i) {
    Vector v = Vector::Ones(1);
    for (int k = 0; k < m; ++k) {
      Vector next(v.size() * d);
      for (Eigen::Index a = 0; a < v.size(); ++a) next.segment(a * d, d) = v[a] * pointer[i];
      v = std::move(next);
    }
    pointer_m[i] = std::move(v);
  }

  Operator out = Operator::Zero(total, total);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Complex weight =
          complex_int_pow(vacuum_overlap(model.phases, i, j), model.n - m);
      if (weight == Complex(0.0, 0.0)) continue;
      const Operator env_block = pointer_m[i] * pointer_m[j].adjoint();
      const Operator& sys = blocks[i][j];
      for (Eigen::Index r = 0; r < sys.rows(); ++r) {
        for (Eigen::Index c = 0; c < sys.cols(); ++c) {
          out.block(r * env_dim, c * env_dim, env_dim, env_dim) +=
              (weight * sys(r, c)) * env_block;
        }
      }
    }
  }
  return out;
}

Operator system_state_after(const Operator& rho_AB, const EnvironmentModel& model) {
  check_system_state(rho_AB, model);
  const int d = model.d();
  const std::vector<std::vector<Operator>> blocks = sandwich_blocks(rho_AB, model);
  Operator out = Operator::Zero(rho_AB.rows(), rho_AB.cols());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out += complex_int_pow(vacuum_overlap(model.phases, i, j), model.n) * blocks[i][j];
    }
  }
  return out;
}

FragmentProfile mutual_info_profile(const Operator& rho_AB, const EnvironmentModel& model,
                                    int m_max, int dim_cap) {
  check_system_state(rho_AB, model);
  if (m_max < 0 || m_max > model.n) {
    throw std::invalid_argument("mutual_info_profile: m_max out of range");
  }
  FragmentProfile profile;
  profile.effective_epsilon =
      1.0 - std::pow(nominal_eta(model.phases), static_cast<double>(model.n));
  const DimensionLayout sys_layout{model.d(), model.d_B};
  profile.irreality_after =
      irreality(system_state_after(rho_AB, model), model.basis, sys_layout);

  for (int m = 0; m <= m_max; ++m) {
    profile.m_values.push_back(m);
    if (m == 0) {
      profile.mutual_info.push_back(0.0);
      continue;
    }
    const Operator rho_sf = reduced_state_structured(rho_AB, model, m, dim_cap);
    std::vector<int> dims{model.d(), model.d_B};
    for (int k = 0; k < m; ++k) dims.push_back(model.d());
    profile.mutual_info.push_back(mutual_information(rho_sf, DimensionLayout(dims), {0, 1}));
  }
  return profile;
}

InfoFlowReport info_flow_check(const Operator& rho_AB, const EnvironmentModel& model) {
  if (model.n != 1) throw std::invalid_argument("info_flow_check: model must have n=1");
  check_system_state(rho_AB, model);
  const int d = model.d();

  const DimensionLayout sys_layout{d, model.d_B};
  const DimensionLayout full_layout{d, model.d_B, d};

  Operator ket0 = Operator::Zero(d, d);
  ket0(0, 0) = 1.0;
  const Operator omega_before = tensor({rho_AB, ket0});
  const Operator omega_after = evolve_dense(rho_AB, model);
  const Operator rho_after = partial_trace(omega_after, full_layout, {0, 1});

  const double delta_irreality = irreality(rho_AB, model.basis, sys_layout) -
                                 irreality(rho_after, model.basis, sys_layout);

  auto info_terms = [&](const Operator& omega) {
    const double i_se = mutual_information(omega, full_layout, {0, 1});
    const double i_e = accessible_info(partial_trace(omega, full_layout, {2}));
    return i_se + i_e;
  };
  const double delta_info = info_terms(omega_after) - info_terms(omega_before);

  return InfoFlowReport{delta_irreality, delta_info};
}

}  // namespace qmon
