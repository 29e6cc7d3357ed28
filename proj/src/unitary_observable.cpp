#include "qmon/unitary_observable.hpp"

#include "qmon/heisenberg_weyl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPhaseSumTol = 1e-10;
constexpr double kUnitarityAbort = 1e-8;

void check_povm(const std::vector<Operator>& povm) {
  if (povm.empty()) throw std::invalid_argument("povm: empty element list");
  const Eigen::Index d = povm.front().rows();
  if (static_cast<Eigen::Index>(povm.size()) != d) {
    throw std::invalid_argument("povm: need exactly d elements on a d-dimensional space");
  }
  Operator sum = Operator::Zero(d, d);
  for (const Operator& m : povm) {
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("povm: element dim mismatch");
    if (!is_hermitian(m, 1e-9)) throw std::invalid_argument("povm: element not Hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::invalid_argument("povm: element not positive semidefinite");
    }
    sum += m;
  }
  if ((sum - Operator::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("povm: elements do not sum to identity");
  }
}

}  // namespace

double canonical_angle(double phi) {
  double r = std::remainder(phi, kTwoPi);  // (−π, π] up to the −π endpoint
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double wrapped_deviation(double x) { return std::remainder(x, kTwoPi); }

PhaseVector::PhaseVector(int dim, std::vector<double> phi) : d(dim), phases(std::move(phi)) {
  check_dimension(d);
  if (static_cast<int>(phases.size()) != d) {
    throw std::invalid_argument("PhaseVector: need exactly d phases");
  }
  double raw_sum = 0.0;
  for (double& p : phases) {
    if (!std::isfinite(p)) throw std::invalid_argument("PhaseVector: non-finite phase");
    raw_sum += p;
    p = canonical_angle(p);
  }
  if (std::abs(wrapped_deviation(raw_sum)) > kPhaseSumTol) {
    throw std::invalid_argument("PhaseVector: phases must sum to zero (mod 2π)");
  }
}

PhaseVector PhaseVector::zero(int dim) {
  return PhaseVector(dim, std::vector<double>(dim, 0.0));
}

std::vector<Complex> alphas_from_phases(const PhaseVector& p) {
  const int d = p.d;
  std::vector<Complex> alpha(d);
  for (int k = 0; k < d; ++k) {
    Complex acc(0.0, 0.0);
    for (int l = 0; l < d; ++l) {
      acc += omega(d, static_cast<long long>(l) * k) *
             Complex(std::cos(p.phases[l]), std::sin(p.phases[l]));
    }
    alpha[k] = acc / static_cast<double>(d);
  }
  return alpha;
}

UnitaryObservable build_T(const PhaseVector& p) {
  const int d = p.d;
  const std::vector<Complex> alpha = alphas_from_phases(p);
  const Operator z = clock_Z(d);
  const Operator x = shift_X(d);
  Operator t = Operator::Zero(d, d);
  Operator xk = Operator::Identity(d, d);
  for (int k = 0; k < d; ++k) {
    t += alpha[k] * z * xk;
    xk = x * xk;
  }
  const double residual = (t * t.adjoint() - Operator::Identity(d, d)).cwiseAbs().maxCoeff();
  if (residual > kUnitarityAbort) {
    throw std::runtime_error("build_T: unitarity residual " + std::to_string(residual));
  }
  return UnitaryObservable{p, std::move(t)};
}

Complex vacuum_overlap(const PhaseVector& p, long long i, long long j) {
  const int d = p.d;
  long long diff = (i - j) % d;
  if (diff < 0) diff += d;
  Complex acc(0.0, 0.0);
  for (int q = 0; q < d; ++q) {
    double s = 0.0;
    for (long long m = 0; m < diff; ++m) s += p.phases[(q + m) % d];
    acc += Complex(std::cos(s), std::sin(s));
  }
  return acc / static_cast<double>(d);
}

std::vector<Operator> generalized_observables(const std::vector<Operator>& povm) {
  check_povm(povm);
  const int d = static_cast<int>(povm.size());
  std::vector<Operator> obs(d);
  for (int i = 0; i < d; ++i) {
    Operator acc = Operator::Zero(povm.front().rows(), povm.front().cols());
    for (int a = 0; a < d; ++a) acc += omega(d, static_cast<long long>(i) * a) * povm[a];
    obs[i] = std::move(acc);
  }
  return obs;
}

std::vector<Operator> povm_from_observables(const std::vector<Operator>& observables) {
  if (observables.empty()) throw std::invalid_argument("povm_from_observables: empty list");
  const int d = static_cast<int>(observables.size());
  const Eigen::Index n = observables.front().rows();
  std::vector<Operator> povm(d);
  for (int a = 0; a < d; ++a) {
    Operator acc = Operator::Zero(n, n);
    for (int i = 0; i < d; ++i) {
      acc += omega(d, -static_cast<long long>(i) * a) * observables[i];
    }
    povm[a] = acc / static_cast<double>(d);
  }
  return povm;
}

std::vector<Operator> povm_from_T(const UnitaryObservable& t) {
  const int d = t.phases.d;
  std::vector<Operator> powers(d);
  powers[0] = Operator::Identity(d, d);
  for (int i = 1; i < d; ++i) powers[i] = powers[i - 1] * t.matrix;
  std::vector<Operator> povm = povm_from_observables(powers);
  for (const Operator& m : povm) {
    Eigen::SelfAdjointEigenSolver<Operator> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::runtime_error("povm_from_T: recovered element not PSD");
    }
  }
  return povm;
}

}  // namespace qmon
