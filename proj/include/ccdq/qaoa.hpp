#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccdq/agp.hpp"
#include "ccdq/portfolio.hpp"
#include "ccdq/statevector.hpp"

namespace ccdq {

enum class Method { xy, xy_cd, grover, penalty };
enum class CdMode { single_eta_per_layer, eta_per_generator };
enum class InitStrategy { linear_ramp, agp_seeded, random };

const char* to_string(Method m);
const char* to_string(CdMode m);
const char* to_string(InitStrategy s);
Method method_from_string(const std::string& s);
CdMode cd_mode_from_string(const std::string& s);
InitStrategy init_strategy_from_string(const std::string& s);

// Method-specific optionals must be set exactly when the method uses them:
// topology for xy/xy_cd, cd_mode for xy_cd, penalty_alpha for penalty.
// cd_mode and penalty_alpha fall back to their documented defaults
// (single_eta_per_layer, default_penalty_alpha) when left empty.
struct AnsatzConfig {
  Method method = Method::xy;
  int depth = 1;
  std::optional<Topology> topology;
  double cvar_alpha = 0.25;
  std::optional<CdMode> cd_mode;
  InitStrategy init_strategy = InitStrategy::agp_seeded;
  // Total objective evaluations across all restarts; empty selects
  // 200 * parameter count, 0 evaluates the initial point only.
  std::optional<std::uint64_t> max_evals;
  int restarts = 3;
  std::optional<double> penalty_alpha;
  std::uint64_t seed = 0;
  int max_pool_weight = 3;
};

enum class GateKind { diagonal_phase, xy_layer, transverse_layer, grover_mixer, pauli_exp };

// One gate application. The rotation angle is params[slot] * scale; scale
// carries the fixed per-generator weight in single_eta_per_layer mode and
// is 1 everywhere else. generator indexes the program pool (pauli_exp only).
struct Gate {
  GateKind kind = GateKind::diagonal_phase;
  int slot = 0;
  double scale = 1.0;
  std::size_t generator = 0;
};

// Fully resolved circuit: initial state, gate list with dense parameter
// slots, and the two cost views. phase_cost drives the phase gates and the
// optimizer objective (penalized for the penalty method); metric_cost is
// always the bare portfolio cost, used for reported CVaR and all metrics.
struct GateProgram {
  Method method = Method::xy;
  int n_qubits = 0;
  int budget = 0;
  int depth = 0;
  bool dicke_init = true;  // plus-state start otherwise
  Topology topology = Topology::ring;
  IsingModel phase_ising;  // structure source for the gate-cost model
  DiagonalCost phase_cost;
  DiagonalCost metric_cost;
  Extrema extrema;  // feasible extrema of the bare cost
  OperatorPool pool;
  std::vector<Gate> gates;
  int param_count = 0;
  std::vector<double> seeded_params;
};

struct TracePoint {
  std::uint64_t evals = 0;  // cumulative objective evaluations
  double best = 0.0;        // best objective value seen so far
};

struct CostReport {
  std::uint64_t cnot_count = 0;
  std::uint64_t two_qubit_gate_count = 0;
  std::uint64_t depth = 0;
};

struct StateMetrics {
  double r = 0.0;  // affine rescaling: feasible optimum 1, feasible worst 0
  bool r_in_range = true;  // false when r leaves [0, 1] (infeasible support)
  double ground_state_probability = 0.0;
  double feasible_mass = 0.0;
};

struct RunResult {
  std::vector<double> best_params;
  double best_objective = 0.0;  // optimizer objective at best_params
  double best_cvar = 0.0;       // CVaR of the bare cost at best_params
  StateMetrics metrics;
  std::string best_bitstring;
  std::vector<TracePoint> trace;
  CostReport cost;
  std::uint64_t evals_used = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

// Validates the config against the instance and assembles the circuit.
// Layer k (1-based) applies cost phase, mixer, then CD exponentials; CD
// weights come from the gauge-potential schedule at lambda_k = k/(p+1).
// Parameter slots per layer are [gamma, beta] plus the layer's eta block.
// Throws std::invalid_argument on inconsistent method/field combinations.
GateProgram build_ansatz(const AnsatzConfig& config, const PortfolioInstance& inst);

QuantumState simulate_program(const GateProgram& program, const std::vector<double>& params);

// CVaR_alpha of the bare cost distribution at the given parameters.
double evaluate(const GateProgram& program, const std::vector<double>& params,
                double cvar_alpha);

// Multi-start Nelder-Mead over the program parameters, minimizing the
// CVaR of phase_cost. Restart 0 starts from the seeded parameters (or a
// uniform [-pi/4, pi/4] draw under InitStrategy::random); later restarts
// perturb the seed with 0.1-sigma Gaussian noise. Deterministic for a
// fixed config.seed. The trace records every improvement of the best
// objective, so its values are nonincreasing.
RunResult optimize(const GateProgram& program, const AnsatzConfig& config);

// r = (<C> - E_max) / (E_min - E_max) with <C> the plain expectation of the
// bare cost; degenerate extrema define r = 1. ground_state_probability is
// the probability of the extremal argmin bitstring; feasible_mass sums the
// budget-weight sector.
StateMetrics state_metrics(const QuantumState& state, const DiagonalCost& metric_cost,
                           const Extrema& extrema, int budget);

// Lowest bare-cost bitstring among feasible basis states with probability
// above 1e-12, ties toward the lexicographically smaller text form. Falls
// back to the full support when the feasible sector is unoccupied.
std::string best_bitstring(const QuantumState& state, const DiagonalCost& metric_cost,
                           int budget);

// Deterministic decomposition cost model (documented in the README):
//   ZZ coupling            2 CNOT, 1 native two-qubit, depth 3 on its pair
//   XY edge rotation       2 CNOT, 1 native two-qubit, depth 1 on its pair
//   weight-w string exp    2(w-1) CNOT, max(0, 2w-3) native, depth 2w-1
//   field / transverse     single-qubit, depth 1
//   Grover mixer           10 B (n-B) + 8 (n-2) CNOT (n >= 3), no fusion
//                          credit, full-width block
// depth is the per-qubit makespan over the block schedule in gate order.
CostReport gate_cost(const GateProgram& program);

}  // namespace ccdq
