#include "ccdq/qaoa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "ccdq/nelder_mead.hpp"
#include "ccdq/rng.hpp"

namespace ccdq {

const char* to_string(Method m) {
  switch (m) {
    case Method::xy: return "xy";
    case Method::xy_cd: return "xy_cd";
    case Method::grover: return "grover";
    case Method::penalty: return "penalty";
  }
  return "?";
}

const char* to_string(CdMode m) {
  return m == CdMode::single_eta_per_layer ? "single_eta_per_layer" : "eta_per_generator";
}

const char* to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::linear_ramp: return "linear_ramp";
    case InitStrategy::agp_seeded: return "agp_seeded";
    case InitStrategy::random: return "random";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "xy") return Method::xy;
  if (s == "xy_cd") return Method::xy_cd;
  if (s == "grover") return Method::grover;
  if (s == "penalty") return Method::penalty;
  throw std::invalid_argument("unknown method: " + s);
}

CdMode cd_mode_from_string(const std::string& s) {
  if (s == "single_eta_per_layer") return CdMode::single_eta_per_layer;
  if (s == "eta_per_generator") return CdMode::eta_per_generator;
  throw std::invalid_argument("unknown cd_mode: " + s);
}

InitStrategy init_strategy_from_string(const std::string& s) {
  if (s == "linear_ramp") return InitStrategy::linear_ramp;
  if (s == "agp_seeded") return InitStrategy::agp_seeded;
  if (s == "random") return InitStrategy::random;
  throw std::invalid_argument("unknown init_strategy: " + s);
}

namespace {

constexpr double kRampMagnitude = 0.6;
constexpr double kSupportFloor = 1e-12;

PauliString letter_string(int n, std::uint64_t x, std::uint64_t z) {
  return PauliString{n, x, z, popcount64(x & z) % 4};
}

// exp(-i theta G) for one pool generator. Antisymmetrized pairs share an X
// mask and take the fused two-string rotation; the general path factors the
// exponential term by term (pool generators commute internally).
void apply_generator(QuantumState& state, const PauliSum& gen, double theta) {
  if (theta == 0.0 || gen.empty()) return;
  const int n = state.n_qubits;
  const auto& terms = gen.terms();
  if (terms.size() == 2) {
    auto it = terms.begin();
    const auto& [k1, c1] = *it;
    const auto& [k2, c2] = *std::next(it);
    bool real_pair = std::abs(c1.imag()) < 1e-14 && std::abs(c2.imag()) < 1e-14;
    if (real_pair && k1.first == k2.first && c1.real() * c2.real() < 0.0 &&
        std::abs(std::abs(c1.real()) - std::abs(c2.real())) < 1e-14) {
      PauliString a = letter_string(n, k1.first, k1.second);
      PauliString b = letter_string(n, k2.first, k2.second);
      if (c1.real() > 0.0)
        apply_pauli_pair_rotation(state, a, b, theta * c1.real());
      else
        apply_pauli_pair_rotation(state, b, a, theta * c2.real());
      return;
    }
  }
  for (const auto& [key, c] : terms)
    apply_pauli_exponential(state, letter_string(n, key.first, key.second),
                            theta * c.real());
}

std::uint64_t grover_block_cnots(int n, int budget) {
  std::uint64_t prep = 10ULL * static_cast<std::uint64_t>(budget) *
                       static_cast<std::uint64_t>(n - budget);
  std::uint64_t phase = n >= 3 ? 8ULL * static_cast<std::uint64_t>(n - 2) : 2ULL;
  return prep + phase;
}

}  // namespace

GateProgram build_ansatz(const AnsatzConfig& config, const PortfolioInstance& inst) {
  inst.validate();
  if (config.depth < 1) throw std::invalid_argument("depth must be positive");
  if (!(config.cvar_alpha > 0.0) || config.cvar_alpha > 1.0)
    throw std::invalid_argument("cvar_alpha must lie in (0, 1]");
  if (config.restarts < 1) throw std::invalid_argument("restarts must be positive");

  const bool wants_topology =
      config.method == Method::xy || config.method == Method::xy_cd;
  if (wants_topology && !config.topology.has_value())
    throw std::invalid_argument("method requires a mixer topology");
  if (!wants_topology && config.topology.has_value())
    throw std::invalid_argument("topology is not used by this method");
  if (config.cd_mode.has_value() && config.method != Method::xy_cd)
    throw std::invalid_argument("cd_mode is only used by xy_cd");
  if (config.penalty_alpha.has_value() && config.method != Method::penalty)
    throw std::invalid_argument("penalty_alpha is only used by the penalty method");
  if (config.method == Method::xy_cd && config.max_pool_weight < 2)
    throw std::invalid_argument("max_pool_weight must be at least 2");

  GateProgram prog;
  prog.method = config.method;
  prog.n_qubits = inst.n_assets;
  prog.budget = inst.budget;
  prog.depth = config.depth;
  prog.dicke_init = config.method != Method::penalty;
  if (config.topology) prog.topology = *config.topology;

  IsingModel bare = to_ising(inst);
  prog.metric_cost = DiagonalCost::from_ising(bare);
  prog.extrema = exact_extrema(bare, inst.n_assets, inst.budget);
  if (config.method == Method::penalty) {
    double alpha = config.penalty_alpha.value_or(default_penalty_alpha(inst));
    prog.phase_ising = to_penalty_ising(inst, alpha);
    prog.phase_cost = DiagonalCost::from_ising(prog.phase_ising);
  } else {
    prog.phase_ising = bare;
    prog.phase_cost = prog.metric_cost;
  }

  const int p = config.depth;
  const double dlambda = 1.0 / (p + 1);
  const CdMode cd_mode = config.cd_mode.value_or(CdMode::single_eta_per_layer);
  const bool agp_seeds = config.init_strategy != InitStrategy::linear_ramp;

  std::vector<AGPSolve> schedule;
  if (config.method == Method::xy_cd) {
    PauliSum h_c = ising_to_pauli(bare);
    PauliSum h_m = xy_mixer_sum(inst.n_assets, prog.topology);
    prog.pool = generate_pool(h_c, h_m, config.max_pool_weight);
    if (!prog.pool.empty()) {
      std::vector<double> lambdas(static_cast<std::size_t>(p));
      for (int k = 1; k <= p; ++k)
        lambdas[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) / (p + 1);
      schedule = agp_schedule(h_c, h_m, prog.pool, lambdas);
    }
  }

  GateKind mixer = GateKind::xy_layer;
  if (config.method == Method::grover) mixer = GateKind::grover_mixer;
  if (config.method == Method::penalty) mixer = GateKind::transverse_layer;

  int slot = 0;
  for (int k = 1; k <= p; ++k) {
    prog.gates.push_back({GateKind::diagonal_phase, slot++, 1.0, 0});
    prog.seeded_params.push_back(kRampMagnitude * k / p);
    prog.gates.push_back({mixer, slot++, 1.0, 0});
    prog.seeded_params.push_back(kRampMagnitude * (1.0 - static_cast<double>(k) / p));

    if (prog.pool.empty() || config.method != Method::xy_cd) continue;
    const Eigen::VectorXd& c = schedule[static_cast<std::size_t>(k - 1)].coefficients;
    if (cd_mode == CdMode::single_eta_per_layer) {
      double scale_ref = c.cwiseAbs().maxCoeff();
      int eta_slot = slot++;
      for (std::size_t j = 0; j < prog.pool.size(); ++j) {
        double w = scale_ref > 0.0 ? c(static_cast<Eigen::Index>(j)) / scale_ref : 0.0;
        prog.gates.push_back({GateKind::pauli_exp, eta_slot, w, j});
      }
      prog.seeded_params.push_back(agp_seeds ? dlambda * scale_ref : 0.0);
    } else {
      for (std::size_t j = 0; j < prog.pool.size(); ++j) {
        prog.gates.push_back({GateKind::pauli_exp, slot++, 1.0, j});
        prog.seeded_params.push_back(
            agp_seeds ? dlambda * c(static_cast<Eigen::Index>(j)) : 0.0);
      }
    }
  }
  prog.param_count = slot;
  return prog;
}

QuantumState simulate_program(const GateProgram& program, const std::vector<double>& params) {
  if (params.size() != static_cast<std::size_t>(program.param_count))
    throw std::invalid_argument("parameter vector length does not match the slot table");
  QuantumState state = program.dicke_init
                           ? dicke_state(program.n_qubits, program.budget)
                           : plus_state(program.n_qubits);
  for (const Gate& g : program.gates) {
    double angle = params[static_cast<std::size_t>(g.slot)] * g.scale;
    switch (g.kind) {
      case GateKind::diagonal_phase:
        apply_diagonal_phase(state, program.phase_cost, angle);
        break;
      case GateKind::xy_layer:
        apply_xy_layer(state, angle, program.topology);
        break;
      case GateKind::transverse_layer:
        apply_transverse_layer(state, angle);
        break;
      case GateKind::grover_mixer:
        apply_grover_mixer(state, angle, program.budget);
        break;
      case GateKind::pauli_exp:
        apply_generator(state, program.pool.generators[g.generator], angle);
        break;
    }
  }
  return state;
}

double evaluate(const GateProgram& program, const std::vector<double>& params,
                double cvar_alpha) {
  QuantumState state = simulate_program(program, params);
  return cvar_expectation(state, program.metric_cost, cvar_alpha);
}

StateMetrics state_metrics(const QuantumState& state, const DiagonalCost& metric_cost,
                           const Extrema& extrema, int budget) {
  StateMetrics m;
  double energy = expectation(state, metric_cost);
  m.r = extrema.e_min == extrema.e_max
            ? 1.0
            : (energy - extrema.e_max) / (extrema.e_min - extrema.e_max);
  m.r_in_range = m.r >= -1e-9 && m.r <= 1.0 + 1e-9;
  m.ground_state_probability = std::norm(state.amplitudes[extrema.argmin]);
  m.feasible_mass = weight_mass(state, budget);
  return m;
}

std::string best_bitstring(const QuantumState& state, const DiagonalCost& metric_cost,
                           int budget) {
  const int n = state.n_qubits;
  bool found = false;
  std::uint64_t best = 0;
  auto scan = [&](bool feasible_only) {
    for (std::uint64_t x = 0; x < state.dim(); ++x) {
      if (std::norm(state.amplitudes[x]) <= kSupportFloor) continue;
      if (feasible_only && popcount64(x) != budget) continue;
      double e = metric_cost.energies[x];
      if (!found || e < metric_cost.energies[best] ||
          (e == metric_cost.energies[best] && lex_less(x, best, n))) {
        best = x;
        found = true;
      }
    }
  };
  scan(true);
  if (!found) scan(false);
  return index_to_bits(best, n);
}

RunResult optimize(const GateProgram& program, const AnsatzConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  const int d = program.param_count;
  const std::uint64_t total_budget =
      config.max_evals.value_or(200ULL * static_cast<std::uint64_t>(d));
  // A zero budget reduces to one evaluation of the initial point.
  const int restarts = total_budget == 0 ? 1 : std::max(1, config.restarts);

  RunResult out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x = program.seeded_params;
  auto objective = [&](const std::vector<double>& x) {
    QuantumState s = simulate_program(program, x);
    double v = cvar_expectation(s, program.phase_cost, config.cvar_alpha);
    ++out.evals_used;
    if (v < best) {
      best = v;
      best_x = x;
      out.trace.push_back({out.evals_used, v});
    }
    return v;
  };

  std::mt19937_64 gen(mix_seed(config.seed, 0x7157a7u));
  std::vector<double> x0(static_cast<std::size_t>(d));
  for (int r = 0; r < restarts; ++r) {
    if (config.init_strategy == InitStrategy::random) {
      for (double& xi : x0)
        xi = (uniform01(gen) - 0.5) * (std::numbers::pi / 2.0);
    } else if (r == 0) {
      x0 = program.seeded_params;
    } else {
      for (std::size_t i = 0; i < x0.size(); ++i)
        x0[i] = program.seeded_params[i] + 0.1 * standard_normal(gen);
    }
    NelderMeadOptions options;
    options.max_evals = total_budget / static_cast<std::uint64_t>(restarts) +
                        (static_cast<std::uint64_t>(r) <
                         total_budget % static_cast<std::uint64_t>(restarts));
    // The simplex always evaluates its start point, so a zero share would
    // leak one evaluation past the total budget.
    if (total_budget > 0 && options.max_evals == 0) continue;
    double prev_best = best;
    NelderMeadResult res = nelder_mead(objective, x0, options);
    if (r == 0 || best < prev_best) out.converged = res.converged;
  }

  out.best_params = best_x;
  out.best_objective = best;
  QuantumState final_state = simulate_program(program, best_x);
  out.best_cvar = cvar_expectation(final_state, program.metric_cost, config.cvar_alpha);
  out.metrics = state_metrics(final_state, program.metric_cost, program.extrema,
                              program.budget);
  out.best_bitstring = best_bitstring(final_state, program.metric_cost, program.budget);
  out.cost = gate_cost(program);
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

CostReport gate_cost(const GateProgram& program) {
  const int n = program.n_qubits;
  CostReport rep;
  std::vector<std::uint64_t> busy_until(static_cast<std::size_t>(n), 0);

  auto block = [&](std::initializer_list<int> qubits, std::uint64_t width) {
    std::uint64_t start = 0;
    for (int q : qubits) start = std::max(start, busy_until[static_cast<std::size_t>(q)]);
    for (int q : qubits) busy_until[static_cast<std::size_t>(q)] = start + width;
  };
  auto mask_block = [&](std::uint64_t mask, std::uint64_t width) {
    std::uint64_t start = 0;
    for (int q = 0; q < n; ++q)
      if ((mask >> q) & 1) start = std::max(start, busy_until[static_cast<std::size_t>(q)]);
    for (int q = 0; q < n; ++q)
      if ((mask >> q) & 1) busy_until[static_cast<std::size_t>(q)] = start + width;
  };

  for (const Gate& g : program.gates) {
    switch (g.kind) {
      case GateKind::diagonal_phase:
        for (const auto& [pair, coupling] : program.phase_ising.couplings) {
          if (coupling == 0.0) continue;
          rep.cnot_count += 2;
          rep.two_qubit_gate_count += 1;
          block({pair.first, pair.second}, 3);
        }
        for (int q = 0; q < n; ++q)
          if (program.phase_ising.fields[static_cast<std::size_t>(q)] != 0.0)
            block({q}, 1);
        break;
      case GateKind::xy_layer:
        for (auto [i, j] : topology_edges(program.topology, n)) {
          rep.cnot_count += 2;
          rep.two_qubit_gate_count += 1;
          block({i, j}, 1);
        }
        break;
      case GateKind::transverse_layer:
        for (int q = 0; q < n; ++q) block({q}, 1);
        break;
      case GateKind::grover_mixer: {
        std::uint64_t width = grover_block_cnots(n, program.budget);
        rep.cnot_count += width;
        rep.two_qubit_gate_count += width;
        mask_block(n >= 64 ? ~0ULL : (1ULL << n) - 1, width);
        break;
      }
      case GateKind::pauli_exp:
        for (const auto& [key, coeff] : program.pool.generators[g.generator].terms()) {
          int w = popcount64(key.first | key.second);
          if (w >= 2) {
            rep.cnot_count += 2ULL * static_cast<std::uint64_t>(w - 1);
            rep.two_qubit_gate_count += static_cast<std::uint64_t>(2 * w - 3);
            mask_block(key.first | key.second, 2ULL * static_cast<std::uint64_t>(w) - 1);
          } else {
            mask_block(key.first | key.second, 1);
          }
        }
        break;
    }
  }
  for (std::uint64_t t : busy_until) rep.depth = std::max(rep.depth, t);
  return rep;
}

}  // namespace ccdq
