#include "qmon/monitoring_maps.hpp"

#include "qmon/heisenberg_weyl.hpp"

#include <cmath>
#include <stdexcept>

namespace qmon {

namespace {

constexpr double kBasisTol = 1e-10;
constexpr double kNegativeClamp = -1e-9;

void check_state_layout(const Operator& state, const DimensionLayout& layout) {
  if (state.rows() != state.cols() || state.rows() != layout.total()) {
    throw std::invalid_argument("state dimension inconsistent with layout");
  }
}

double clamp_nonnegative(double value, const char* what) {
  if (value < kNegativeClamp) {
    throw std::runtime_error(std::string(what) + ": negative beyond tolerance");
  }
  return std::max(value, 0.0);
}

}  // namespace

ObservableBasis::ObservableBasis(int dim, std::vector<Operator> projs,
                                 std::vector<double> eigenvalues)
    : d(dim), projectors(std::move(projs)), labels(std::move(eigenvalues)) {
  check_dimension(d);
  if (static_cast<int>(projectors.size()) != d) {
    throw std::invalid_argument("ObservableBasis: need exactly d projectors");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != d) {
    throw std::invalid_argument("ObservableBasis: label count mismatch");
  }
  Operator sum = Operator::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const Operator& pa = projectors[a];
    if (pa.rows() != d || pa.cols() != d) {
      throw std::invalid_argument("ObservableBasis: projector dim mismatch");
    }
    for (int b = 0; b < d; ++b) {
      const Operator expect = (a == b) ? pa : Operator(Operator::Zero(d, d));
      if ((pa * projectors[b] - expect).cwiseAbs().maxCoeff() > kBasisTol) {
        throw std::invalid_argument("ObservableBasis: projectors not orthogonal/idempotent");
      }
    }
    sum += pa;
  }
  if ((sum - Operator::Identity(d, d)).cwiseAbs().maxCoeff() > kBasisTol) {
    throw std::invalid_argument("ObservableBasis: projectors do not resolve identity");
  }
}

ObservableBasis ObservableBasis::computational(int dim) {
  check_dimension(dim);
  std::vector<Operator> projs(dim);
  std::vector<double> labels(dim);
  for (int a = 0; a < dim; ++a) {
    projs[a] = Operator::Zero(dim, dim);
    projs[a](a, a) = 1.0;
    labels[a] = a;
  }
  return ObservableBasis(dim, std::move(projs), std::move(labels));
}

MonitoringSpec::MonitoringSpec(ObservableBasis b, double eps)
    : basis(std::move(b)), epsilon(eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("MonitoringSpec: epsilon outside [0,1]");
  }
}

Operator dephase(const Operator& state, const ObservableBasis& basis,
                 const DimensionLayout& layout) {
  check_state_layout(state, layout);
  if (layout.dims.front() != basis.d) {
    throw std::invalid_argument("dephase: basis dimension does not match first layout factor");
  }
  const int rest = layout.total() / basis.d;
  const Operator id_rest = Operator::Identity(rest, rest);
  Operator out = Operator::Zero(state.rows(), state.cols());
  for (const Operator& pa : basis.projectors) {
    const Operator lifted = tensor({pa, id_rest});
    out += lifted * state * lifted;
  }
  return out;
}

Operator monitor(const Operator& state, const MonitoringSpec& spec,
                 const DimensionLayout& layout) {
  return (1.0 - spec.epsilon) * state + spec.epsilon * dephase(state, spec.basis, layout);
}

double effective_strength(double epsilon, long long n) {
  if (n < 0) throw std::invalid_argument("effective_strength: n must be >= 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("effective_strength: epsilon outside [0,1]");
  }
  return 1.0 - std::pow(1.0 - epsilon, static_cast<double>(n));
}

Operator monitor_repeated(const Operator& state, const MonitoringSpec& spec, long long n,
                          const DimensionLayout& layout) {
  const MonitoringSpec effective(spec.basis, effective_strength(spec.epsilon, n));
  return monitor(state, effective, layout);
}

double irreality(const Operator& state, const ObservableBasis& basis,
                 const DimensionLayout& layout) {
  const double gain =
      von_neumann_entropy(dephase(state, basis, layout)) - von_neumann_entropy(state);
  return clamp_nonnegative(gain, "irreality");
}

IrrealityParts decompose_irreality(const Operator& state, const ObservableBasis& basis,
                                   const DimensionLayout& layout) {
  if (layout.factor_count() != 2) {
    throw std::invalid_argument("decompose_irreality: layout must be bipartite (A,B)");
  }
  check_state_layout(state, layout);
  const Operator rho_a = partial_trace(state, layout, {0});
  const DimensionLayout layout_a{layout.dims[0]};
  const double coherence = irreality(rho_a, basis, layout_a);
  const double mi_before = mutual_information(state, layout, {0});
  const double mi_after = mutual_information(dephase(state, basis, layout), layout, {0});
  const double discord = clamp_nonnegative(mi_before - mi_after, "discord");
  return IrrealityParts{coherence, discord};
}

double accessible_info(const Operator& state) {
  const double d = static_cast<double>(state.rows());
  return std::log2(d) - von_neumann_entropy(state);
}

double mutual_information(const Operator& state, const DimensionLayout& layout,
                          const std::vector<int>& first_group) {
  check_state_layout(state, layout);
  if (first_group.empty() ||
      static_cast<int>(first_group.size()) >= layout.factor_count()) {
    throw std::invalid_argument("mutual_information: partition must split the factors");
  }
  std::vector<bool> in_first(layout.factor_count(), false);
  for (int f : first_group) {
    if (f < 0 || f >= layout.factor_count()) {
      throw std::invalid_argument("mutual_information: factor index out of range");
    }
    in_first[f] = true;
  }
  std::vector<int> second_group;
  for (int f = 0; f < layout.factor_count(); ++f) {
    if (!in_first[f]) second_group.push_back(f);
  }
  const double s_x = von_neumann_entropy(partial_trace(state, layout, first_group));
  const double s_y = von_neumann_entropy(partial_trace(state, layout, second_group));
  const double s_xy = von_neumann_entropy(state);
  return clamp_nonnegative(s_x + s_y - s_xy, "mutual_information");
}

}  // namespace qmon
