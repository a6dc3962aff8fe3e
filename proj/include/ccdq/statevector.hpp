#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ccdq/pauli.hpp"
#include "ccdq/portfolio.hpp"

namespace ccdq {

enum class Topology { ring, chain, complete };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& s);

// Mixer edge list in the fixed order all layers use: pairs (i, j) with
// i < j, sorted lexicographically.
std::vector<std::pair<int, int>> topology_edges(Topology t, int n);

// Full 2^n statevector; qubit i is bit i of the amplitude index.
struct QuantumState {
  int n_qubits = 0;
  std::vector<Complex> amplitudes;

  std::size_t dim() const { return amplitudes.size(); }
  double norm() const;
};

QuantumState basis_state(int n, std::uint64_t x);
QuantumState plus_state(int n);
// Equal superposition of all weight-`budget` basis states.
QuantumState dicke_state(int n, int budget);

// Diagonal observable with a precomputed energy-ascending index order
// (ties by index) shared by every CVaR evaluation.
struct DiagonalCost {
  int n_qubits = 0;
  std::vector<double> energies;       // indexed by basis state
  std::vector<std::uint32_t> order;   // indices sorted by (energy, index)

  static DiagonalCost from_ising(const IsingModel& ising);
  static DiagonalCost from_energies(int n, std::vector<double> energies);
};

// In-place gates. Each preserves the norm exactly in exact arithmetic.
// amplitudes[x] *= exp(-i gamma E_x)
void apply_diagonal_phase(QuantumState& state, const DiagonalCost& cost, double gamma);
// prod over edges (fixed order) of exp(-i beta (X_i X_j + Y_i Y_j))
void apply_xy_layer(QuantumState& state, double beta, Topology t);
// prod over qubits of exp(-i beta X_q)
void apply_transverse_layer(QuantumState& state, double beta);
// exp(-i theta P) for a Hermitian string P (P^2 = I)
void apply_pauli_exponential(QuantumState& state, const PauliString& p, double theta);
// exp(-i theta (P1 - P2)) in one pass, for Hermitian commuting strings with
// equal X masks (P1 P2 is then diagonal and the difference rotates pairs).
void apply_pauli_pair_rotation(QuantumState& state, const PauliString& p1,
                               const PauliString& p2, double theta);
// exp(-i beta |F><F|) with |F> the weight-`budget` Dicke state
void apply_grover_mixer(QuantumState& state, double beta, int budget);

// Pure variants of the in-place gates.
QuantumState with_diagonal_phase(QuantumState state, const DiagonalCost& cost, double gamma);
QuantumState with_xy_layer(QuantumState state, double beta, Topology t);
QuantumState with_transverse_layer(QuantumState state, double beta);
QuantumState with_pauli_exponential(QuantumState state, const PauliString& p, double theta);
QuantumState with_grover_mixer(QuantumState state, double beta, int budget);

double expectation(const QuantumState& state, const DiagonalCost& cost);

// Exact-distribution CVaR_alpha: mean of the lowest-energy alpha tail of
// the outcome distribution, with the boundary state counted fractionally.
// alpha must lie in (0, 1].
double cvar_expectation(const QuantumState& state, const DiagonalCost& cost, double alpha);

// `shots` basis-state draws by inverse CDF over the exact distribution.
std::vector<std::uint64_t> sample(const QuantumState& state, int shots, std::uint64_t seed);

// Total probability on basis states of the given Hamming weight.
double weight_mass(const QuantumState& state, int weight);

// Debug helper: the k most probable basis states, one per line.
std::string dump_top_amplitudes(const QuantumState& state, int k);

}  // namespace ccdq
