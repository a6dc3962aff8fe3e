#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccdq/pauli.hpp"

namespace ccdq {

// Budget-constrained mean-variance selection problem: choose exactly
// `budget` assets x in {0,1}^n minimizing
//   C(x) = risk_aversion * x^T sigma x - mu^T x.
struct PortfolioInstance {
  int n_assets = 0;
  int budget = 0;
  double risk_aversion = 0.5;
  std::vector<double> mu;     // expected returns, size n
  std::vector<double> sigma;  // covariance, row-major n x n, symmetric PSD
  std::optional<std::uint64_t> seed;         // set when generated
  std::optional<std::string> generator_id;   // set when generated

  double sigma_at(int i, int j) const {
    return sigma[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_assets) +
                 static_cast<std::size_t>(j)];
  }

  // Sizes, symmetry (1e-10) and 0 < budget < n_assets; throws on violation.
  void validate() const;
};

// Diagonal spin Hamiltonian offset + sum_i fields[i] Z_i
// + sum_{i<j} couplings[{i,j}] Z_i Z_j. Coupling keys always satisfy i < j.
struct IsingModel {
  int n_qubits = 0;
  double offset = 0.0;
  std::vector<double> fields;
  std::map<std::pair<int, int>, double> couplings;
};

// Deterministic instance generation from a seed: mu entries are
// Uniform[0,1) draws (asset order), then an n x n matrix G of standard
// normals is drawn row-major and sigma = G G^T / n. The draw order and the
// RNG mappings are part of the file contract.
PortfolioInstance random_instance(std::uint64_t seed, int n_assets, int budget,
                                  double risk_aversion);

// Exact spin encoding of C(x) under x_i = (1 - Z_i) / 2.
IsingModel to_ising(const PortfolioInstance& inst);

// max(1, max_i |mu_i| + risk_aversion * max_ij |sigma_ij| * n): large enough
// that no infeasible configuration can undercut the feasible optimum.
double default_penalty_alpha(const PortfolioInstance& inst);

// Spin encoding of C(x) + alpha * (sum_i x_i - budget)^2.
IsingModel to_penalty_ising(const PortfolioInstance& inst, double alpha);

// Energy of a computational basis state; bit i of x is asset i, and a set
// bit means the asset is selected (Z eigenvalue -1).
double cost_of_bitstring(const IsingModel& ising, std::uint64_t x);

// C(x) evaluated directly from mu/sigma (no spin encoding).
double classical_cost(const PortfolioInstance& inst, std::uint64_t x);
double penalized_cost(const PortfolioInstance& inst, std::uint64_t x, double alpha);

struct Extrema {
  double e_min = 0.0;
  double e_max = 0.0;
  std::uint64_t argmin = 0;  // ties resolve to the lexicographically
                             // smallest bitstring (asset 0 leftmost)
};

// Enumeration over the fixed-weight slice is refused above this count.
inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

// Exact extrema of the Ising energy over all weight-`budget` bitstrings.
Extrema exact_extrema(const IsingModel& ising, int n, int budget);

PauliSum ising_to_pauli(const IsingModel& ising);

// Smallest eigenvalue of sigma (PSD oracle check).
double min_sigma_eigenvalue(const PortfolioInstance& inst);

// JSON instance files carry, in order: n_assets, budget, risk_aversion,
// mu, sigma (nested row arrays), and seed/generator_id when generated.
std::string instance_to_json(const PortfolioInstance& inst);
PortfolioInstance instance_from_json(const std::string& text);
void save_instance(const PortfolioInstance& inst, const std::string& path);
PortfolioInstance load_instance(const std::string& path);

}  // namespace ccdq
