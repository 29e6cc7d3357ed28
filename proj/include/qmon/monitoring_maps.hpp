#pragma once

#include "qmon/operator_algebra.hpp"

#include <vector>

namespace qmon {

// A d-outcome observable on subsystem A as its rank-1 eigenprojectors
// A_a, with A_a A_{a'} = δ_{aa'} A_a and Σ_a A_a = 𝟙.  The eigenvalue
// labels are carried along but never enter any channel.
struct ObservableBasis {
  int d = 0;
  std::vector<Operator> projectors;
  std::vector<double> labels;

  ObservableBasis(int dim, std::vector<Operator> projs, std::vector<double> eigenvalues = {});
  static ObservableBasis computational(int dim);
};

// Monitoring of strength ε: M_A^ε(ρ) = (1−ε)ρ + εΦ_A(ρ).
struct MonitoringSpec {
  ObservableBasis basis;
  double epsilon;

  MonitoringSpec(ObservableBasis b, double eps);
};

// Non-selective projective measurement of A on the first layout factor:
// Φ_A(ρ) = Σ_a (A_a⊗𝟙)ρ(A_a⊗𝟙).  Idempotent.
Operator dephase(const Operator& state, const ObservableBasis& basis,
                 const DimensionLayout& layout);

Operator monitor(const Operator& state, const MonitoringSpec& spec,
                 const DimensionLayout& layout);

// n monitorings of strength ε compose to one of strength 1 − (1−ε)^n.
double effective_strength(double epsilon, long long n);

Operator monitor_repeated(const Operator& state, const MonitoringSpec& spec, long long n,
                          const DimensionLayout& layout);

// 𝕴_A(ρ) = S(Φ_A(ρ)) − S(ρ), in bits; clamped at 0 against rounding.
double irreality(const Operator& state, const ObservableBasis& basis,
                 const DimensionLayout& layout);

// 𝕴_A = C(ρ_A) + D_A(ρ): local coherence 𝕴_A(Tr_B ρ) plus the
// dephasing-induced loss of mutual information.
struct IrrealityParts {
  double coherence;
  double discord_like;
};
IrrealityParts decompose_irreality(const Operator& state, const ObservableBasis& basis,
                                   const DimensionLayout& layout);

// Accessible information I(ρ) = log₂ d − S(ρ), in bits.
double accessible_info(const Operator& state);

// I_{X:Y} = S(ρ_X) + S(ρ_Y) − S(ρ) across the given split of layout factors;
// `first_group` lists the factor indices of X.
double mutual_information(const Operator& state, const DimensionLayout& layout,
                          const std::vector<int>& first_group);

}  // namespace qmon
