#include "qmon/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qmon {

namespace {

void check_finite(const Operator& a, const char* what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": entries must be finite");
  }
}

// splitmix64; mixes (seed, stream) into one well-distributed 64-bit state.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

DimensionLayout::DimensionLayout(std::initializer_list<int> ds)
    : DimensionLayout(std::vector<int>(ds)) {}

DimensionLayout::DimensionLayout(std::vector<int> ds) : dims(std::move(ds)) {
  if (dims.empty()) throw std::invalid_argument("DimensionLayout: no factors");
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("DimensionLayout: factor dims must be >= 1");
  }
}

int DimensionLayout::total() const {
  long long t = 1;
  for (int d : dims) t *= d;
  if (t > (1LL << 30)) throw std::invalid_argument("DimensionLayout: total dimension overflow");
  return static_cast<int>(t);
}

Operator tensor(const std::vector<Operator>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  for (const Operator& f : factors) {
    if (f.rows() != f.cols()) throw std::invalid_argument("tensor: factors must be square");
  }
  Operator out = factors.front();
  for (std::size_t f = 1; f < factors.size(); ++f) {
    const Operator& b = factors[f];
    const Eigen::Index ra = out.rows(), rb = b.rows();
    Operator next(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i) {
      for (Eigen::Index j = 0; j < ra; ++j) {
        next.block(i * rb, j * rb, rb, rb) = out(i, j) * b;
      }
    }
    out = std::move(next);
  }
  return out;
}

Operator partial_trace(const Operator& state, const DimensionLayout& layout,
                       const std::vector<int>& keep) {
  const int nf = layout.factor_count();
  if (state.rows() != state.cols() || state.rows() != layout.total()) {
    throw std::invalid_argument("partial_trace: layout inconsistent with state dimension");
  }
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) throw std::invalid_argument("partial_trace: keep index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate keep index");
    kept[k] = true;
  }

  // Row-major strides: stride[f] = product of dims of factors right of f.
  std::vector<long long> stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * layout.dims[f + 1];

  std::vector<int> keep_sorted, traced;
  for (int f = 0; f < nf; ++f) (kept[f] ? keep_sorted : traced).push_back(f);

  // Flat offsets of every kept multi-index and every traced multi-index.
  auto enumerate_offsets = [&](const std::vector<int>& factors) {
    std::vector<long long> offs{0};
    for (int f : factors) {
      std::vector<long long> next;
      next.reserve(offs.size() * layout.dims[f]);
      for (long long base : offs) {
        for (int v = 0; v < layout.dims[f]; ++v) next.push_back(base + v * stride[f]);
      }
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<long long> kept_offs = enumerate_offsets(keep_sorted);
  const std::vector<long long> traced_offs = enumerate_offsets(traced);

  const Eigen::Index m = static_cast<Eigen::Index>(kept_offs.size());
  Operator out = Operator::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      Complex acc(0.0, 0.0);
      for (long long t : traced_offs) {
        acc += state(kept_offs[a] + t, kept_offs[b] + t);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

bool is_hermitian(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void validate_density(const Operator& rho, double tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density: not square");
  check_finite(rho, "density");
  if (!is_hermitian(rho, tol)) throw std::invalid_argument("density: not Hermitian within tolerance");
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol || std::abs(rho.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("density: trace != 1 within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("density: negative eigenvalue beyond tolerance");
  }
}

Eigen::VectorXd density_eigenvalues(const Operator& rho) {
  validate_density(rho);
  Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::max(ev[i], 0.0);
  return ev;
}

double von_neumann_entropy(const Operator& state) {
  const Eigen::VectorXd ev = density_eigenvalues(state);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > 0.0) s -= ev[i] * std::log2(ev[i]);
  }
  return std::max(s, 0.0);
}

double trace_distance(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  if (!is_hermitian(a, 1e-8) || !is_hermitian(b, 1e-8)) {
    throw std::invalid_argument("trace_distance: inputs must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(a - b, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Operator random_density(int dim, int rank, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_density: dim must be >= 1");
  if (rank < 1 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  std::mt19937_64 rng = seeded_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Operator g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Operator rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(stream + 0x6a09e667f3bcc909ULL)));
}

}  // namespace qmon
