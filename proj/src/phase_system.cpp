#include "qmon/phase_system.hpp"

#include "qmon/heisenberg_weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qmon {

namespace {

// ψ table: psums(p, q) = Σ_{m=0}^{p} φ_{[q+m]_d} for p = 0…d−2.
Eigen::MatrixXd window_sums(const std::vector<double>& phi) {
  const int d = static_cast<int>(phi.size());
  Eigen::MatrixXd psums(d - 1, d);
  for (int q = 0; q < d; ++q) psums(0, q) = phi[q];
  for (int p = 1; p < d - 1; ++p) {
    for (int q = 0; q < d; ++q) psums(p, q) = psums(p - 1, q) + phi[(q + p) % d];
  }
  return psums;
}

// Internal objective for the solver: free variables x = (φ_0…φ_{d−2}),
// φ_{d−1} = −Σ x keeps the zero-sum constraint structural.
struct Objective {
  int d;
  double target_eta;

  std::vector<double> full_phases(const Eigen::VectorXd& x) const {
    std::vector<double> phi(d);
    double s = 0.0;
    for (int i = 0; i < d - 1; ++i) {
      phi[i] = x[i];
      s += x[i];
    }
    phi[d - 1] = -s;
    return phi;
  }

  // m = (d−1) sine residuals + (d−2) cosine differences + 1 eta residual.
  int residual_count() const { return 2 * d - 2; }

  Eigen::VectorXd value(const Eigen::VectorXd& x) const {
    const std::vector<double> phi = full_phases(x);
    const Eigen::MatrixXd psums = window_sums(phi);
    Eigen::VectorXd f(residual_count());
    int idx = 0;
    for (int p = 0; p < d - 1; ++p) {
      double s = 0.0;
      for (int q = 0; q < d; ++q) s += std::sin(psums(p, q));
      f[idx++] = s;
    }
    double c0 = 0.0;
    for (int q = 0; q < d; ++q) c0 += std::cos(psums(0, q));
    for (int p = 1; p < d - 1; ++p) {
      double c = 0.0;
      for (int q = 0; q < d; ++q) c += std::cos(psums(p, q));
      f[idx++] = c - c0;
    }
    double eta = 0.0;
    for (int q = 0; q < d; ++q) eta += std::cos(phi[q]);
    f[idx++] = eta / d - target_eta;
    return f;
  }

  // Analytic Jacobian.  ∂ψ_q^{(p)}/∂φ_r = 1 iff r lies in the cyclic window
  // {q,…,q+p}; the chain rule for the eliminated phase subtracts the
  // φ_{d−1} column.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    const std::vector<double> phi = full_phases(x);
    const Eigen::MatrixXd psums = window_sums(phi);

    Eigen::MatrixXd dfull = Eigen::MatrixXd::Zero(residual_count(), d);
    std::vector<bool> in_window(d);
    int idx_sin = 0;
    int idx_cos = d - 1;
    Eigen::VectorXd dc0 = Eigen::VectorXd::Zero(d);
    for (int p = 0; p < d - 1; ++p) {
      Eigen::VectorXd dsin = Eigen::VectorXd::Zero(d);
      Eigen::VectorXd dcos = Eigen::VectorXd::Zero(d);
      for (int q = 0; q < d; ++q) {
        const double c = std::cos(psums(p, q));
        const double s = std::sin(psums(p, q));
        for (int m = 0; m <= p; ++m) {
          const int r = (q + m) % d;
          dsin[r] += c;
          dcos[r] -= s;
        }
      }
      dfull.row(idx_sin++) = dsin.transpose();
      if (p == 0) {
        dc0 = dcos;
      } else {
        dfull.row(idx_cos++) = (dcos - dc0).transpose();
      }
    }
    for (int r = 0; r < d; ++r) dfull(residual_count() - 1, r) = -std::sin(phi[r]) / d;

    Eigen::MatrixXd j(residual_count(), d - 1);
    for (int r = 0; r < d - 1; ++r) j.col(r) = dfull.col(r) - dfull.col(d - 1);
    return j;
  }
};

struct LocalFit {
  Eigen::VectorXd x;
  double cost = 0.0;
  int iterations = 0;
};

// Damped Gauss-Newton (Levenberg-Marquardt) on ½‖f‖².
LocalFit levenberg_marquardt(const Objective& obj, Eigen::VectorXd x0, int max_iterations,
                             double stop_cost) {
  const int n = static_cast<int>(x0.size());
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd f = obj.value(x);
  double cost = f.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  for (; it < max_iterations && cost > stop_cost; ++it) {
    const Eigen::MatrixXd j = obj.jacobian(x);
    const Eigen::MatrixXd h = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * f;

    bool stepped = false;
    for (int attempt = 0; attempt < 25; ++attempt) {
      Eigen::MatrixXd damped = h;
      for (int i = 0; i < n; ++i) damped(i, i) += lambda * (h(i, i) + 1e-12);
      const Eigen::VectorXd delta = damped.ldlt().solve(-g);
      const Eigen::VectorXd x_try = x + delta;
      const Eigen::VectorXd f_try = obj.value(x_try);
      const double cost_try = f_try.squaredNorm();
      if (cost_try < cost) {
        x = x_try;
        f = f_try;
        cost = cost_try;
        lambda = std::max(lambda * 0.3, 1e-14);
        stepped = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) break;
  }
  return LocalFit{std::move(x), cost, it};
}

}  // namespace

NoiseLevel::NoiseLevel(double value) : eta(value) {
  if (value < -1e-9 || value > 1.0 + 1e-9) {
    throw std::domain_error("NoiseLevel: eta outside [0,1] beyond tolerance");
  }
  eta = std::clamp(value, 0.0, 1.0);
}

double nominal_eta(const PhaseVector& p) {
  double s = 0.0;
  for (double phi : p.phases) s += std::cos(phi);
  return s / p.d;
}

NoiseLevel eta_from_phases(const PhaseVector& p) { return NoiseLevel(nominal_eta(p)); }

Eigen::VectorXd residuals(const PhaseVector& p) {
  const int d = p.d;
  const Eigen::MatrixXd psums = window_sums(p.phases);
  Eigen::VectorXd r(2 * d - 2);
  double sum = 0.0;
  for (double phi : p.phases) sum += phi;
  r[0] = wrapped_deviation(sum);
  int idx = 1;
  for (int pp = 0; pp < d - 1; ++pp) {
    double s = 0.0;
    for (int q = 0; q < d; ++q) s += std::sin(psums(pp, q));
    r[idx++] = s;
  }
  double c0 = 0.0;
  for (int q = 0; q < d; ++q) c0 += std::cos(psums(0, q));
  for (int pp = 1; pp < d - 1; ++pp) {
    double c = 0.0;
    for (int q = 0; q < d; ++q) c += std::cos(psums(pp, q));
    r[idx++] = c - c0;
  }
  return r;
}

PhaseVector analytic_phases(int d, double theta) {
  check_dimension(d);
  std::vector<double> phi(d, 0.0);
  phi[0] = theta;
  phi[1] = -theta;
  return PhaseVector(d, std::move(phi));
}

SolverReport solve_phases(int d, NoiseLevel target_eta, std::uint64_t seed,
                          const SolverOptions& options) {
  check_dimension(d);
  if (options.residual_tol <= 0.0 || options.eta_tol <= 0.0) {
    throw std::invalid_argument("solve_phases: tolerances must be positive");
  }
  const double target = target_eta.eta;
  const Objective obj{d, target};
  const int n = d - 1;
  // Push the squared residual well below the acceptance thresholds.
  const double stop_cost =
      0.01 * std::min(options.residual_tol * options.residual_tol,
                      options.eta_tol * options.eta_tol);

  std::mt19937_64 rng = seeded_rng(seed, 0x70686173ULL);
  std::uniform_real_distribution<double> uniform(-std::numbers::pi,
                                                 std::numbers::pi);

  // Deterministic warm starts: the full-noise point, the closed family when
  // it reaches the target, and the evenly spaced noiseless solution
  // φ_q = (π/d)(2q − d + 1); random starts afterwards.
  std::vector<Eigen::VectorXd> warm;
  warm.push_back(Eigen::VectorXd::Zero(n));
  const double cos_theta = (d * target - d + 2.0) / 2.0;
  if (std::abs(cos_theta) <= 1.0) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const double theta = std::acos(cos_theta);
    x[0] = theta;
    if (n > 1) x[1] = -theta;
    warm.push_back(std::move(x));
  }
  {
    Eigen::VectorXd x(n);
    for (int q = 0; q < n; ++q) x[q] = (std::numbers::pi / d) * (2.0 * q - d + 1.0);
    warm.push_back(std::move(x));
  }

  SolverReport best{PhaseVector::zero(d), 0.0, 0.0, 0, seed, false, 0};
  double best_cost = std::numeric_limits<double>::infinity();
  int total_iterations = 0;

  for (int restart = 0; restart < options.max_restarts; ++restart) {
    Eigen::VectorXd x0(n);
    if (restart < static_cast<int>(warm.size())) {
      x0 = warm[restart];
    } else {
      for (int i = 0; i < n; ++i) x0[i] = uniform(rng);
    }

    const LocalFit fit =
        levenberg_marquardt(obj, std::move(x0), options.max_iterations_per_start, stop_cost);
    total_iterations += fit.iterations;

    PhaseVector candidate(d, obj.full_phases(fit.x));
    const double res_norm = residuals(candidate).norm();
    const double eta = nominal_eta(candidate);

    if (fit.cost < best_cost) {
      best_cost = fit.cost;
      best.phases = candidate;
      best.residual_norm = res_norm;
      best.achieved_eta = eta;
      best.restarts_used = restart + 1;
    }
    if (res_norm <= options.residual_tol && std::abs(eta - target) <= options.eta_tol) {
      best.phases = std::move(candidate);
      best.residual_norm = res_norm;
      best.achieved_eta = eta;
      best.found = true;
      best.restarts_used = restart + 1;
      break;
    }
  }
  best.iterations = total_iterations;
  return best;
}

}  // namespace qmon
