#include "qmon/heisenberg_weyl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmon {

void check_dimension(int d) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
}

Complex omega(int d, long long power) {
  check_dimension(d);
  long long r = power % d;
  if (r < 0) r += d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
  return Complex(std::cos(angle), std::sin(angle));
}

Operator clock_Z(int d) {
  check_dimension(d);
  Operator z = Operator::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = omega(d, k);
  return z;
}

Operator shift_X(int d) {
  check_dimension(d);
  Operator x = Operator::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + 1) % d, k) = 1.0;
  return x;
}

Operator fourier_V(int d) {
  check_dimension(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Operator v(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      v(i, j) = scale * omega(d, static_cast<long long>(i) * j);
    }
  }
  return v;
}

Operator operator_power(const Operator& a, int d, long long k) {
  check_dimension(d);
  if (a.rows() != a.cols()) throw std::invalid_argument("operator_power: not square");
  long long r = k % d;
  if (r < 0) r += d;
  Operator out = Operator::Identity(a.rows(), a.cols());
  for (long long i = 0; i < r; ++i) out = out * a;
  return out;
}

}  // namespace qmon
