// qmon — batch experiment runner for qudit monitoring models.
//
// Subcommands:
//   solve-phases    find phases realizing a target monitoring noise
//   convergence     distance to the dephased state versus environment size
//   fragments       mutual information I(S:F_m) against fragment size
//   qubit-baseline  c-maybe channel against the d=2 general construction
//
// Every subcommand accepts --config <json> (flags override file keys),
// --out <path> (default stdout) and --format csv|json.  Exit codes:
// 0 success, 1 validation error, 2 solver-not-found, 3 dimension cap.

#include "qmon/darwinism.hpp"
#include "qmon/heisenberg_weyl.hpp"
#include "qmon/monitoring_maps.hpp"
#include "qmon/phase_system.hpp"
#include "qmon/qubit_baseline.hpp"
#include "qmon/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace qmon;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolverNotFound = 2;
constexpr int kExitDimCap = 3;

struct CliError : std::runtime_error {
  int code;
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), code(exit_code) {}
};

int dimension_cap_from_env() {
  if (const char* raw = std::getenv("QMON_DIM_CAP")) {
    try {
      const int cap = std::stoi(raw);
      if (cap < 2) throw std::invalid_argument("cap");
      return cap;
    } catch (const std::exception&) {
      throw CliError(kExitValidation, "QMON_DIM_CAP must be an integer >= 2");
    }
  }
  return kDefaultDimCap;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return seeded_rng(seed, stream)();
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw CliError(kExitValidation, "cannot open output path: " + out_path);
  file << payload;
}

// Merges JSON config keys under the CLI flags: a flag given on the command
// line wins, otherwise the config value is taken.  Unknown keys are rejected.
class ConfigLayer {
 public:
  ConfigLayer(const CLI::App& cmd, const std::string& config_path) : cmd_(cmd) {
    if (config_path.empty()) return;
    std::ifstream file(config_path);
    if (!file) throw CliError(kExitValidation, "cannot open config file: " + config_path);
    try {
      file >> data_;
    } catch (const json::exception& e) {
      throw CliError(kExitValidation, std::string("config parse error: ") + e.what());
    }
    if (!data_.is_object()) throw CliError(kExitValidation, "config must be a JSON object");
  }

  template <typename T>
  void merge(const std::string& key, T& value) {
    known_.insert(key);
    if (cmd_.count("--" + key) > 0 || !data_.contains(key)) return;
    try {
      value = data_.at(key).get<T>();
    } catch (const json::exception&) {
      throw CliError(kExitValidation, "config key '" + key + "' has the wrong type");
    }
  }

  bool provides(const std::string& key) const { return data_.contains(key); }

  void reject_unknown_keys() const {
    for (const auto& item : data_.items()) {
      if (!known_.contains(item.key())) {
        throw CliError(kExitValidation, "unknown config key: " + item.key());
      }
    }
  }

 private:
  const CLI::App& cmd_;
  json data_;
  std::set<std::string> known_;
};

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw CliError(kExitValidation, "format must be csv or json");
  }
}

// ── shared experiment plumbing ───────────────────────────────────────────────

struct StateSpec {
  std::string kind = "plus-state";  // plus-state | pure-random | mixed-random | explicit
  int rank = 0;                     // 0 = full rank for mixed-random
  std::string file;
};

Operator build_state(const StateSpec& spec, int d_a, int d_b, std::uint64_t seed) {
  const int dim = d_a * d_b;
  if (spec.kind == "plus-state") {
    Vector psi = Vector::Zero(dim);
    for (int k = 0; k < d_a; ++k) psi[k * d_b] = 1.0 / std::sqrt(static_cast<double>(d_a));
    return psi * psi.adjoint();  // |+>_A ⊗ |0>_B
  }
  if (spec.kind == "pure-random") {
    return random_density(dim, 1, sub_seed(seed, 1));
  }
  if (spec.kind == "mixed-random") {
    const int rank = spec.rank > 0 ? spec.rank : dim;
    if (rank > dim) throw CliError(kExitValidation, "rank exceeds the state dimension");
    return random_density(dim, rank, sub_seed(seed, 1));
  }
  if (spec.kind == "explicit") {
    if (spec.file.empty()) throw CliError(kExitValidation, "state 'explicit' needs --state-file");
    std::ifstream file(spec.file);
    if (!file) throw CliError(kExitValidation, "cannot open state file: " + spec.file);
    json j;
    file >> j;
    const Operator rho = operator_from_json(j);
    if (rho.rows() != dim) {
      throw CliError(kExitValidation, "state file dimension does not match d * d_B");
    }
    validate_density(rho);
    return rho;
  }
  throw CliError(kExitValidation, "unknown state spec: " + spec.kind);
}

// Phases from --theta (analytic family), --eta (solver) or a phases file.
PhaseVector resolve_phases(int d, std::optional<double> theta, std::optional<double> eta,
                           const std::string& phases_file, std::uint64_t seed) {
  const int sources = static_cast<int>(theta.has_value()) + static_cast<int>(eta.has_value()) +
                      static_cast<int>(!phases_file.empty());
  if (sources != 1) {
    throw CliError(kExitValidation, "specify exactly one of --theta, --eta, --phases-file");
  }
  if (theta) return analytic_phases(d, *theta);
  if (!phases_file.empty()) {
    std::ifstream file(phases_file);
    if (!file) throw CliError(kExitValidation, "cannot open phases file: " + phases_file);
    json j;
    file >> j;
    PhaseVector p = phases_from_json(j);
    if (p.d != d) throw CliError(kExitValidation, "phases file dimension mismatch");
    return p;
  }
  if (*eta < 0.0 || *eta > 1.0) throw CliError(kExitValidation, "eta must lie in [0,1]");
  const SolverReport report = solve_phases(d, NoiseLevel(*eta), sub_seed(seed, 2));
  if (!report.found) {
    throw CliError(kExitSolverNotFound,
                   "no phase solution found for eta=" + format_float(*eta));
  }
  return report.phases;
}

// ── solve-phases ─────────────────────────────────────────────────────────────

int run_solve_phases(int d, double eta, std::uint64_t seed, double tol, double eta_tol,
                     const std::string& out, const std::string& format) {
  check_dimension(d);
  if (eta < 0.0 || eta > 1.0) throw CliError(kExitValidation, "eta must lie in [0,1]");
  if (tol <= 0.0 || eta_tol <= 0.0) throw CliError(kExitValidation, "tolerances must be positive");

  SolverOptions options;
  options.residual_tol = tol;
  options.eta_tol = eta_tol;
  const SolverReport report = solve_phases(d, NoiseLevel(eta), seed, options);

  std::string payload;
  if (format == "json") {
    json j = solver_report_to_json(report);
    j["target_eta"] = eta;
    payload = j.dump(2) + "\n";
  } else {
    std::string phases;
    for (int l = 0; l < d; ++l) {
      if (l) phases += ';';
      phases += format_float(report.phases.phases[l]);
    }
    payload = "d,target_eta,achieved_eta,residual_norm,iterations,restarts_used,found,phases\n";
    payload += std::to_string(d) + ',' + format_float(eta) + ',' +
               format_float(report.achieved_eta) + ',' + format_float(report.residual_norm) +
               ',' + std::to_string(report.iterations) + ',' +
               std::to_string(report.restarts_used) + ',' + (report.found ? "1" : "0") + ',' +
               phases + '\n';
  }
  write_output(out, payload);
  return report.found ? kExitOk : kExitSolverNotFound;
}

// ── convergence ──────────────────────────────────────────────────────────────

int run_convergence(int d, int d_b, std::optional<double> theta, std::optional<double> eta,
                    const std::string& phases_file, int n_max, const StateSpec& state_spec,
                    std::uint64_t seed, const std::string& out, const std::string& format) {
  check_dimension(d);
  if (d_b < 1) throw CliError(kExitValidation, "d_B must be >= 1");
  if (n_max < 1) throw CliError(kExitValidation, "n-max must be >= 1");

  const PhaseVector phases = resolve_phases(d, theta, eta, phases_file, seed);
  const double noise = nominal_eta(phases);
  const Operator rho = build_state(state_spec, d, d_b, seed);
  const ObservableBasis basis = ObservableBasis::computational(d);
  const DimensionLayout layout{d, d_b};
  const Operator fixed_point = dephase(rho, basis, layout);

  struct Row {
    int n;
    double distance, irreality_bits, effective_epsilon;
  };
  std::vector<Row> rows;
  for (int n = 0; n <= n_max; ++n) {
    const EnvironmentModel model(phases, n, d_b);
    const Operator after = system_state_after(rho, model);
    rows.push_back({n, trace_distance(after, fixed_point), irreality(after, basis, layout),
                    1.0 - std::pow(noise, static_cast<double>(n))});
  }

  std::string payload;
  if (format == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      arr.push_back({{"n", r.n},
                     {"trace_distance_to_dephased", r.distance},
                     {"irreality_bits", r.irreality_bits},
                     {"effective_epsilon", r.effective_epsilon}});
    }
    payload = arr.dump(2) + "\n";
  } else {
    payload = "n,trace_distance_to_dephased,irreality_bits,effective_epsilon\n";
    for (const Row& r : rows) {
      payload += std::to_string(r.n) + ',' + format_float(r.distance) + ',' +
                 format_float(r.irreality_bits) + ',' + format_float(r.effective_epsilon) + '\n';
    }
  }
  write_output(out, payload);
  return kExitOk;
}

// ── fragments ────────────────────────────────────────────────────────────────

// Same profile as darwinism::mutual_info_profile but via literal dense
// evolution plus partial traces; `auto` switches here below the cap.
FragmentProfile dense_profile(const Operator& rho, const EnvironmentModel& model, int m_max,
                              int dim_cap) {
  FragmentProfile profile;
  profile.effective_epsilon =
      1.0 - std::pow(nominal_eta(model.phases), static_cast<double>(model.n));
  const Operator omega = evolve_dense(rho, model, dim_cap);
  std::vector<int> dims{model.d(), model.d_B};
  for (int k = 0; k < model.n; ++k) dims.push_back(model.d());
  const DimensionLayout layout(dims);

  const Operator system_after = partial_trace(omega, layout, {0, 1});
  profile.irreality_after =
      irreality(system_after, model.basis, DimensionLayout{model.d(), model.d_B});

  for (int m = 0; m <= m_max; ++m) {
    profile.m_values.push_back(m);
    if (m == 0) {
      profile.mutual_info.push_back(0.0);
      continue;
    }
    std::vector<int> keep{0, 1};
    for (int k = 0; k < m; ++k) keep.push_back(2 + k);
    const Operator rho_sf = partial_trace(omega, layout, keep);
    std::vector<int> frag_dims{model.d(), model.d_B};
    for (int k = 0; k < m; ++k) frag_dims.push_back(model.d());
    profile.mutual_info.push_back(
        mutual_information(rho_sf, DimensionLayout(frag_dims), {0, 1}));
  }
  return profile;
}

int run_fragments(int d, int d_b, std::optional<double> theta, std::optional<double> eta,
                  const std::string& phases_file, int n, int m_max, const StateSpec& state_spec,
                  std::uint64_t seed, const std::string& backend, const std::string& out,
                  const std::string& format) {
  check_dimension(d);
  if (d_b < 1) throw CliError(kExitValidation, "d_B must be >= 1");
  if (n < 0) throw CliError(kExitValidation, "n must be >= 0");
  if (m_max < 0 || m_max > n) throw CliError(kExitValidation, "m-max must lie in [0, n]");
  if (backend != "dense" && backend != "structured" && backend != "auto") {
    throw CliError(kExitValidation, "backend must be dense, structured or auto");
  }

  const int dim_cap = dimension_cap_from_env();
  const PhaseVector phases = resolve_phases(d, theta, eta, phases_file, seed);
  const Operator rho = build_state(state_spec, d, d_b, seed);
  const EnvironmentModel model(phases, n, d_b);

  long long full_dim = d * d_b;
  for (int k = 0; k < n; ++k) full_dim *= d;

  std::string chosen = backend;
  if (chosen == "auto") chosen = (full_dim <= dim_cap) ? "dense" : "structured";

  const FragmentProfile profile = (chosen == "dense")
                                      ? dense_profile(rho, model, m_max, dim_cap)
                                      : mutual_info_profile(rho, model, m_max, dim_cap);

  std::string payload;
  if (format == "json") {
    json j = fragment_profile_to_json(profile);
    j["backend"] = chosen;
    payload = j.dump(2) + "\n";
  } else {
    payload = fragment_profile_to_csv(profile);
  }
  write_output(out, payload);
  return kExitOk;
}

// ── qubit-baseline ───────────────────────────────────────────────────────────

int run_qubit_baseline(double theta_min, double theta_max, int points, int states,
                       std::uint64_t seed, const std::string& out, const std::string& format) {
  if (points < 1) throw CliError(kExitValidation, "points must be >= 1");
  if (states < 1) throw CliError(kExitValidation, "states must be >= 1");

  struct Row {
    double theta, eps_cmaybe, eps_general_t, channel_distance;
  };
  std::vector<Row> rows;
  for (int k = 0; k < points; ++k) {
    const double theta =
        points == 1 ? theta_min : theta_min + (theta_max - theta_min) * k / (points - 1);
    const StrengthComparison eps = compare_with_general_T(theta);
    double worst = 0.0;
    for (int s = 0; s < states; ++s) {
      const Operator rho = random_density(2, 1 + s % 2, sub_seed(seed, 100 + s));
      const Operator via_cmaybe = monitored_by_cmaybe(rho, theta);
      const EnvironmentModel model(analytic_phases(2, std::numbers::pi / 2.0 - theta), 1, 1);
      worst = std::max(worst, trace_distance(via_cmaybe, system_state_after(rho, model)));
    }
    rows.push_back({theta, eps.eps_cmaybe, eps.eps_general_t, worst});
  }

  std::string payload;
  if (format == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      arr.push_back({{"theta", r.theta},
                     {"eps_cmaybe", r.eps_cmaybe},
                     {"eps_generalT", r.eps_general_t},
                     {"channel_distance", r.channel_distance}});
    }
    payload = arr.dump(2) + "\n";
  } else {
    payload = "theta,eps_cmaybe,eps_generalT,channel_distance\n";
    for (const Row& r : rows) {
      payload += format_float(r.theta) + ',' + format_float(r.eps_cmaybe) + ',' +
                 format_float(r.eps_general_t) + ',' + format_float(r.channel_distance) + '\n';
    }
  }
  write_output(out, payload);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qudit monitoring experiments"};
  app.require_subcommand(1);

  // solve-phases
  auto* solve = app.add_subcommand("solve-phases", "solve the phase constraint system");
  int sp_d = 0;
  double sp_eta = -1.0, sp_tol = 1e-10, sp_eta_tol = 1e-8;
  std::uint64_t sp_seed = 1;
  std::string sp_out, sp_format = "json", sp_config;
  solve->add_option("--d", sp_d, "qudit dimension");
  solve->add_option("--eta", sp_eta, "target monitoring noise in [0,1]");
  solve->add_option("--seed", sp_seed, "solver seed");
  solve->add_option("--tol", sp_tol, "residual tolerance");
  solve->add_option("--eta-tol", sp_eta_tol, "achieved-eta tolerance");
  solve->add_option("--out", sp_out, "output path (default stdout)");
  solve->add_option("--format", sp_format, "csv|json");
  solve->add_option("--config", sp_config, "JSON config file; flags override");

  // convergence
  auto* conv = app.add_subcommand("convergence", "distance to realism versus n");
  int cv_d = 0, cv_db = 1, cv_nmax = 0, cv_rank = 0;
  double cv_theta_raw = 0.0, cv_eta_raw = 0.0;
  std::string cv_phases_file, cv_state = "plus-state", cv_state_file;
  std::uint64_t cv_seed = 1;
  std::string cv_out, cv_format = "csv", cv_config;
  conv->add_option("--d", cv_d, "qudit dimension");
  conv->add_option("--d-b", cv_db, "bystander dimension");
  conv->add_option("--theta", cv_theta_raw, "analytic-family angle");
  conv->add_option("--eta", cv_eta_raw, "target noise (runs the solver)");
  conv->add_option("--phases-file", cv_phases_file, "JSON array of radians");
  conv->add_option("--n-max", cv_nmax, "largest environment size");
  conv->add_option("--state", cv_state, "plus-state|pure-random|mixed-random|explicit");
  conv->add_option("--rank", cv_rank, "rank for mixed-random");
  conv->add_option("--state-file", cv_state_file, "operator JSON for explicit state");
  conv->add_option("--seed", cv_seed, "randomness seed");
  conv->add_option("--out", cv_out, "output path (default stdout)");
  conv->add_option("--format", cv_format, "csv|json");
  conv->add_option("--config", cv_config, "JSON config file; flags override");

  // fragments
  auto* frag = app.add_subcommand("fragments", "mutual information against fragment size");
  int fr_d = 0, fr_db = 1, fr_n = 0, fr_mmax = -1, fr_rank = 0;
  double fr_theta_raw = 0.0, fr_eta_raw = 0.0;
  std::string fr_phases_file, fr_state = "plus-state", fr_state_file, fr_backend = "auto";
  std::uint64_t fr_seed = 1;
  std::string fr_out, fr_format = "csv", fr_config;
  frag->add_option("--d", fr_d, "qudit dimension");
  frag->add_option("--d-b", fr_db, "bystander dimension");
  frag->add_option("--theta", fr_theta_raw, "analytic-family angle");
  frag->add_option("--eta", fr_eta_raw, "target noise (runs the solver)");
  frag->add_option("--phases-file", fr_phases_file, "JSON array of radians");
  frag->add_option("--n", fr_n, "environment size");
  frag->add_option("--m-max", fr_mmax, "largest fragment (default n)");
  frag->add_option("--state", fr_state, "plus-state|pure-random|mixed-random|explicit");
  frag->add_option("--rank", fr_rank, "rank for mixed-random");
  frag->add_option("--state-file", fr_state_file, "operator JSON for explicit state");
  frag->add_option("--seed", fr_seed, "randomness seed");
  frag->add_option("--backend", fr_backend, "dense|structured|auto");
  frag->add_option("--out", fr_out, "output path (default stdout)");
  frag->add_option("--format", fr_format, "csv|json");
  frag->add_option("--config", fr_config, "JSON config file; flags override");

  // qubit-baseline
  auto* qb = app.add_subcommand("qubit-baseline", "c-maybe versus the general d=2 channel");
  double qb_min = 0.0, qb_max = std::numbers::pi / 2.0;
  int qb_points = 20, qb_states = 10;
  std::uint64_t qb_seed = 1;
  std::string qb_out, qb_format = "csv", qb_config;
  qb->add_option("--theta-min", qb_min, "grid start");
  qb->add_option("--theta-max", qb_max, "grid end");
  qb->add_option("--points", qb_points, "grid size");
  qb->add_option("--states", qb_states, "random states per angle");
  qb->add_option("--seed", qb_seed, "randomness seed");
  qb->add_option("--out", qb_out, "output path (default stdout)");
  qb->add_option("--format", qb_format, "csv|json");
  qb->add_option("--config", qb_config, "JSON config file; flags override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (solve->parsed()) {
      ConfigLayer cfg(*solve, sp_config);
      cfg.merge("d", sp_d);
      cfg.merge("eta", sp_eta);
      cfg.merge("seed", sp_seed);
      cfg.merge("tol", sp_tol);
      cfg.merge("eta-tol", sp_eta_tol);
      cfg.merge("out", sp_out);
      cfg.merge("format", sp_format);
      cfg.reject_unknown_keys();
      check_format(sp_format);
      if (sp_d < 2) throw CliError(kExitValidation, "--d is required and must be >= 2");
      return run_solve_phases(sp_d, sp_eta, sp_seed, sp_tol, sp_eta_tol, sp_out, sp_format);
    }
    if (conv->parsed()) {
      ConfigLayer cfg(*conv, cv_config);
      cfg.merge("d", cv_d);
      cfg.merge("d-b", cv_db);
      cfg.merge("theta", cv_theta_raw);
      cfg.merge("eta", cv_eta_raw);
      cfg.merge("phases-file", cv_phases_file);
      cfg.merge("n-max", cv_nmax);
      cfg.merge("state", cv_state);
      cfg.merge("rank", cv_rank);
      cfg.merge("state-file", cv_state_file);
      cfg.merge("seed", cv_seed);
      cfg.merge("out", cv_out);
      cfg.merge("format", cv_format);
      cfg.reject_unknown_keys();
      check_format(cv_format);
      if (cv_d < 2) throw CliError(kExitValidation, "--d is required and must be >= 2");
      const bool has_theta = conv->count("--theta") > 0 || cfg.provides("theta");
      const bool has_eta = conv->count("--eta") > 0 || cfg.provides("eta");
      StateSpec spec{cv_state, cv_rank, cv_state_file};
      return run_convergence(cv_d, cv_db,
                             has_theta ? std::optional<double>(cv_theta_raw) : std::nullopt,
                             has_eta ? std::optional<double>(cv_eta_raw) : std::nullopt,
                             cv_phases_file, cv_nmax, spec, cv_seed, cv_out, cv_format);
    }
    if (frag->parsed()) {
      ConfigLayer cfg(*frag, fr_config);
      cfg.merge("d", fr_d);
      cfg.merge("d-b", fr_db);
      cfg.merge("theta", fr_theta_raw);
      cfg.merge("eta", fr_eta_raw);
      cfg.merge("phases-file", fr_phases_file);
      cfg.merge("n", fr_n);
      cfg.merge("m-max", fr_mmax);
      cfg.merge("state", fr_state);
      cfg.merge("rank", fr_rank);
      cfg.merge("state-file", fr_state_file);
      cfg.merge("seed", fr_seed);
      cfg.merge("backend", fr_backend);
      cfg.merge("out", fr_out);
      cfg.merge("format", fr_format);
      cfg.reject_unknown_keys();
      check_format(fr_format);
      if (fr_d < 2) throw CliError(kExitValidation, "--d is required and must be >= 2");
      const bool has_theta = frag->count("--theta") > 0 || cfg.provides("theta");
      const bool has_eta = frag->count("--eta") > 0 || cfg.provides("eta");
      if (fr_mmax < 0) fr_mmax = fr_n;
      StateSpec spec{fr_state, fr_rank, fr_state_file};
      return run_fragments(fr_d, fr_db,
                           has_theta ? std::optional<double>(fr_theta_raw) : std::nullopt,
                           has_eta ? std::optional<double>(fr_eta_raw) : std::nullopt,
                           fr_phases_file, fr_n, fr_mmax, spec, fr_seed, fr_backend, fr_out,
                           fr_format);
    }
    if (qb->parsed()) {
      ConfigLayer cfg(*qb, qb_config);
      cfg.merge("theta-min", qb_min);
      cfg.merge("theta-max", qb_max);
      cfg.merge("points", qb_points);
      cfg.merge("states", qb_states);
      cfg.merge("seed", qb_seed);
      cfg.merge("out", qb_out);
      cfg.merge("format", qb_format);
      cfg.reject_unknown_keys();
      check_format(qb_format);
      return run_qubit_baseline(qb_min, qb_max, qb_points, qb_states, qb_seed, qb_out, qb_format);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const DimensionCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
