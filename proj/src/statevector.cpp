#include "ccdq/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ccdq/rng.hpp"

namespace ccdq {

const char* to_string(Topology t) {
  switch (t) {
    case Topology::ring: return "ring";
    case Topology::chain: return "chain";
    default: return "complete";
  }
}

Topology topology_from_string(const std::string& s) {
  if (s == "ring") return Topology::ring;
  if (s == "chain") return Topology::chain;
  if (s == "complete") return Topology::complete;
  throw std::invalid_argument("unknown topology: " + s);
}

std::vector<std::pair<int, int>> topology_edges(Topology t, int n) {
  if (n < 2) throw std::invalid_argument("topologies need at least 2 qubits");
  std::vector<std::pair<int, int>> edges;
  switch (t) {
    case Topology::chain:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case Topology::ring:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      if (n > 2) edges.emplace_back(0, n - 1);
      break;
    case Topology::complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

double QuantumState::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

namespace {

void check_state(const QuantumState& s) {
  if (s.n_qubits < 1 || s.dim() != (std::size_t{1} << s.n_qubits))
    throw std::invalid_argument("state dimension does not match qubit count");
}

}  // namespace

QuantumState basis_state(int n, std::uint64_t x) {
  if (n < 1 || n > 30) throw std::invalid_argument("statevector qubit count out of range");
  if (x >= (std::uint64_t{1} << n)) throw std::invalid_argument("basis index out of range");
  QuantumState s;
  s.n_qubits = n;
  s.amplitudes.assign(std::size_t{1} << n, Complex{0.0, 0.0});
  s.amplitudes[x] = Complex{1.0, 0.0};
  return s;
}

QuantumState plus_state(int n) {
  if (n < 1 || n > 30) throw std::invalid_argument("statevector qubit count out of range");
  QuantumState s;
  s.n_qubits = n;
  double a = std::pow(2.0, -0.5 * n);
  s.amplitudes.assign(std::size_t{1} << n, Complex{a, 0.0});
  return s;
}

QuantumState dicke_state(int n, int budget) {
  if (n < 1 || n > 30) throw std::invalid_argument("statevector qubit count out of range");
  if (budget < 0 || budget > n) throw std::invalid_argument("budget must be in [0, n]");
  QuantumState s;
  s.n_qubits = n;
  s.amplitudes.assign(std::size_t{1} << n, Complex{0.0, 0.0});
  std::uint64_t count = binomial(n, budget);
  double a = 1.0 / std::sqrt(static_cast<double>(count));
  std::uint64_t x = lowest_weight_index(budget);
  for (std::uint64_t k = 0; k < count; ++k) {
    s.amplitudes[x] = Complex{a, 0.0};
    if (k + 1 < count) x = next_same_weight(x);
  }
  return s;
}

DiagonalCost DiagonalCost::from_ising(const IsingModel& ising) {
  if (ising.n_qubits < 1 || ising.n_qubits > 30)
    throw std::invalid_argument("diagonal cost qubit count out of range");
  std::vector<double> e(std::size_t{1} << ising.n_qubits);
  for (std::uint64_t x = 0; x < e.size(); ++x) e[x] = cost_of_bitstring(ising, x);
  return from_energies(ising.n_qubits, std::move(e));
}

DiagonalCost DiagonalCost::from_energies(int n, std::vector<double> energies) {
  if (energies.size() != (std::size_t{1} << n))
    throw std::invalid_argument("energy table size does not match qubit count");
  DiagonalCost c;
  c.n_qubits = n;
  c.energies = std::move(energies);
  c.order.resize(c.energies.size());
  std::iota(c.order.begin(), c.order.end(), 0u);
  std::stable_sort(c.order.begin(), c.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return c.energies[a] < c.energies[b];
  });
  return c;
}

void apply_diagonal_phase(QuantumState& state, const DiagonalCost& cost, double gamma) {
  check_state(state);
  if (cost.n_qubits != state.n_qubits)
    throw std::invalid_argument("cost and state qubit counts differ");
  for (std::size_t x = 0; x < state.dim(); ++x)
    state.amplitudes[x] *= std::polar(1.0, -gamma * cost.energies[x]);
}

void apply_xy_layer(QuantumState& state, double beta, Topology t) {
  check_state(state);
  auto edges = topology_edges(t, state.n_qubits);
  double c = std::cos(2.0 * beta);
  Complex is{0.0, std::sin(2.0 * beta)};
  for (auto [i, j] : edges) {
    std::uint64_t mi = std::uint64_t{1} << i;
    std::uint64_t mj = std::uint64_t{1} << j;
    // exp(-i beta (XX + YY)) rotates each {bit_i, bit_j} = {10, 01} pair.
    for (std::uint64_t x = 0; x < state.dim(); ++x) {
      if ((x & mi) || !(x & mj)) continue;
      std::uint64_t y = x ^ mi ^ mj;
      Complex a = state.amplitudes[x];
      Complex b = state.amplitudes[y];
      state.amplitudes[x] = c * a - is * b;
      state.amplitudes[y] = c * b - is * a;
    }
  }
}

void apply_transverse_layer(QuantumState& state, double beta) {
  check_state(state);
  double c = std::cos(beta);
  Complex is{0.0, std::sin(beta)};
  for (int q = 0; q < state.n_qubits; ++q) {
    std::uint64_t m = std::uint64_t{1} << q;
    for (std::uint64_t x = 0; x < state.dim(); ++x) {
      if (x & m) continue;
      Complex a = state.amplitudes[x];
      Complex b = state.amplitudes[x | m];
      state.amplitudes[x] = c * a - is * b;
      state.amplitudes[x | m] = c * b - is * a;
    }
  }
}

namespace {

// Value of the Hermitian string on |x>: i^phase * (-1)^parity(z & x),
// guaranteed by hermiticity to make exp(-i theta P) unitary.
inline Complex string_phase(const PauliString& p, std::uint64_t x) {
  Complex base{1.0, 0.0};
  switch (((p.phase_power % 4) + 4) % 4) {
    case 1: base = Complex{0.0, 1.0}; break;
    case 2: base = Complex{-1.0, 0.0}; break;
    case 3: base = Complex{0.0, -1.0}; break;
    default: break;
  }
  return (popcount64(p.z_bits & x) & 1) ? -base : base;
}

}  // namespace

void apply_pauli_exponential(QuantumState& state, const PauliString& p, double theta) {
  check_state(state);
  if (p.n_qubits != state.n_qubits)
    throw std::invalid_argument("pauli and state qubit counts differ");
  if (!p.is_hermitian())
    throw std::invalid_argument("pauli exponential needs a Hermitian string");
  std::uint64_t m = p.x_bits;
  if (m == 0) {
    // Diagonal string: pure phases.
    for (std::uint64_t x = 0; x < state.dim(); ++x) {
      double d = string_phase(p, x).real();
      state.amplitudes[x] *= std::polar(1.0, -theta * d);
    }
    return;
  }
  double c = std::cos(theta);
  Complex mis{0.0, -std::sin(theta)};
  std::uint64_t top = std::bit_floor(m);
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    if (x & top) continue;  // one visit per {x, x^m} pair
    std::uint64_t y = x ^ m;
    Complex a = state.amplitudes[x];
    Complex b = state.amplitudes[y];
    state.amplitudes[x] = c * a + mis * string_phase(p, y) * b;
    state.amplitudes[y] = c * b + mis * string_phase(p, x) * a;
  }
}

void apply_pauli_pair_rotation(QuantumState& state, const PauliString& p1,
                               const PauliString& p2, double theta) {
  check_state(state);
  if (p1.n_qubits != state.n_qubits || p2.n_qubits != state.n_qubits)
    throw std::invalid_argument("pauli and state qubit counts differ");
  if (!p1.is_hermitian() || !p2.is_hermitian())
    throw std::invalid_argument("pair rotation needs Hermitian strings");
  if (p1.x_bits != p2.x_bits || p1.x_bits == 0 || p1.z_bits == p2.z_bits)
    throw std::invalid_argument("pair rotation needs distinct strings with equal X masks");
  if (!commutes(p1, p2))
    throw std::invalid_argument("pair rotation needs commuting strings");
  // D = P1 P2 is diagonal with eigenvalues +-1; P1 - P2 annihilates the +1
  // eigenspace and squares to 4I on the -1 eigenspace.
  PauliString d = multiply(p1, p2);
  std::uint64_t m = p1.x_bits;
  double c = std::cos(2.0 * theta);
  Complex mis2{0.0, -0.5 * std::sin(2.0 * theta)};
  std::uint64_t top = std::bit_floor(m);
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    if (x & top) continue;
    if (string_phase(d, x).real() > 0.0) continue;
    std::uint64_t y = x ^ m;
    Complex a = state.amplitudes[x];
    Complex b = state.amplitudes[y];
    Complex wy = string_phase(p1, y) - string_phase(p2, y);
    Complex wx = string_phase(p1, x) - string_phase(p2, x);
    state.amplitudes[x] = c * a + mis2 * wy * b;
    state.amplitudes[y] = c * b + mis2 * wx * a;
  }
}

void apply_grover_mixer(QuantumState& state, double beta, int budget) {
  check_state(state);
  if (budget < 0 || budget > state.n_qubits)
    throw std::invalid_argument("budget must be in [0, n]");
  std::uint64_t count = binomial(state.n_qubits, budget);
  double f = 1.0 / std::sqrt(static_cast<double>(count));
  Complex inner{0.0, 0.0};
  std::uint64_t x = lowest_weight_index(budget);
  for (std::uint64_t k = 0; k < count; ++k) {
    inner += state.amplitudes[x];
    if (k + 1 < count) x = next_same_weight(x);
  }
  inner *= f;
  Complex shift = (std::polar(1.0, -beta) - 1.0) * inner * f;
  x = lowest_weight_index(budget);
  for (std::uint64_t k = 0; k < count; ++k) {
    state.amplitudes[x] += shift;
    if (k + 1 < count) x = next_same_weight(x);
  }
}

QuantumState with_diagonal_phase(QuantumState state, const DiagonalCost& cost, double gamma) {
  apply_diagonal_phase(state, cost, gamma);
  return state;
}
QuantumState with_xy_layer(QuantumState state, double beta, Topology t) {
  apply_xy_layer(state, beta, t);
  return state;
}
QuantumState with_transverse_layer(QuantumState state, double beta) {
  apply_transverse_layer(state, beta);
  return state;
}
QuantumState with_pauli_exponential(QuantumState state, const PauliString& p, double theta) {
  apply_pauli_exponential(state, p, theta);
  return state;
}
QuantumState with_grover_mixer(QuantumState state, double beta, int budget) {
  apply_grover_mixer(state, beta, budget);
  return state;
}

double expectation(const QuantumState& state, const DiagonalCost& cost) {
  check_state(state);
  if (cost.n_qubits != state.n_qubits)
    throw std::invalid_argument("cost and state qubit counts differ");
  double acc = 0.0;
  for (std::size_t x = 0; x < state.dim(); ++x)
    acc += std::norm(state.amplitudes[x]) * cost.energies[x];
  return acc;
}

double cvar_expectation(const QuantumState& state, const DiagonalCost& cost, double alpha) {
  check_state(state);
  if (cost.n_qubits != state.n_qubits)
    throw std::invalid_argument("cost and state qubit counts differ");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("cvar alpha must lie in (0, 1]");
  // Walk outcomes from lowest energy up, filling exactly alpha of mass; the
  // state at the boundary contributes fractionally.
  double remaining = alpha;
  double acc = 0.0;
  for (std::uint32_t idx : cost.order) {
    double p = std::norm(state.amplitudes[idx]);
    if (p <= 0.0) continue;
    double take = std::min(p, remaining);
    acc += take * cost.energies[idx];
    remaining -= take;
    if (remaining <= 0.0) break;
  }
  return acc / alpha;
}

std::vector<std::uint64_t> sample(const QuantumState& state, int shots, std::uint64_t seed) {
  check_state(state);
  if (shots < 0) throw std::invalid_argument("shots must be nonnegative");
  std::vector<double> cdf(state.dim());
  double acc = 0.0;
  for (std::size_t x = 0; x < state.dim(); ++x) {
    acc += std::norm(state.amplitudes[x]);
    cdf[x] = acc;
  }
  double total = acc;
  std::mt19937_64 gen(seed);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (auto& shot : out) {
    double u = uniform01(gen) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    shot = static_cast<std::uint64_t>(it == cdf.end() ? cdf.size() - 1
                                                      : std::distance(cdf.begin(), it));
  }
  return out;
}

double weight_mass(const QuantumState& state, int weight) {
  check_state(state);
  double acc = 0.0;
  for (std::uint64_t x = 0; x < state.dim(); ++x)
    if (popcount64(x) == weight) acc += std::norm(state.amplitudes[x]);
  return acc;
}

std::string dump_top_amplitudes(const QuantumState& state, int k) {
  check_state(state);
  std::vector<std::uint64_t> idx(state.dim());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
    return std::norm(state.amplitudes[a]) > std::norm(state.amplitudes[b]);
  });
  std::ostringstream out;
  k = std::min<int>(k, static_cast<int>(state.dim()));
  for (int r = 0; r < k; ++r) {
    const auto& a = state.amplitudes[idx[static_cast<std::size_t>(r)]];
    out << index_to_bits(idx[static_cast<std::size_t>(r)], state.n_qubits) << "  p="
        << std::norm(a) << "  amp=(" << a.real() << "," << a.imag() << ")\n";
  }
  return out.str();
}

}  // namespace ccdq
