#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccdq/pauli.hpp"
#include "ccdq/statevector.hpp"

namespace ccdq {

// Origin of a pool generator: an X/Y pair (two_body), an X/Y pair carrying
// Z factors (three_body), or a non-pattern string kept verbatim (other).
struct GeneratorTag {
  enum class Kind { two_body, three_body, other };
  Kind kind = Kind::other;
  std::vector<int> qubits;  // pair (ascending) first, then Z support
};

const char* to_string(GeneratorTag::Kind k);

// Hermitian, traceless, pairwise independent counterdiabatic generators.
// two_body/three_body entries are antisymmetrized combinations
// X_a Y_b Z_S - Y_a X_b Z_S with unit coefficients (a < b).
struct OperatorPool {
  int n_qubits = 0;
  int max_weight = 0;
  std::vector<PauliSum> generators;
  std::vector<GeneratorTag> tags;

  std::size_t size() const { return generators.size(); }
  bool empty() const { return generators.empty(); }
};

// sum over mixer edges of X_i X_j + Y_i Y_j
PauliSum xy_mixer_sum(int n, Topology t);
// sum over qubits of X_i
PauliSum transverse_field_sum(int n);

// Candidate strings come from the first-order commutator [H_M, H_C]
// (higher nesting_order values re-commute the support against H_M + H_C;
// exposed for exploration, default 1). Each candidate matching the one-X
// one-Y pattern becomes one antisymmetrized generator; anything else is
// kept as a single-string generator. Generators above max_weight are
// dropped. An empty pool is legal and left to the caller to handle.
OperatorPool generate_pool(const PauliSum& h_c, const PauliSum& h_m, int max_weight,
                           int nesting_order = 1);

// Normal equations of the action principle at fixed lambda:
//   m[k][l] = -Tr([O_k, H] [O_l, H])        (positive semidefinite)
//   v[k]    = i Tr(O_k [H, dH])
// both normalized by nothing (raw traces), evaluated via Pauli algebra.
struct ActionSystem {
  Eigen::MatrixXd m;
  Eigen::VectorXd v;
};

ActionSystem build_action_system(const PauliSum& h_lambda, const PauliSum& dh_dlambda,
                                 const OperatorPool& pool);

struct AGPSolve {
  double lambda = 0.0;
  Eigen::MatrixXd m;
  Eigen::VectorXd v;
  Eigen::VectorXd coefficients;
  double residual = 0.0;        // ||m c - v|| with the unregularized m
  bool degenerate = false;      // regularization engaged
  double regularization = 0.0;  // Tikhonov shift added to the diagonal
};

// Solves m c = v. When the smallest eigenvalue dips below tol * ||m||, a
// Tikhonov shift tol * max(trace(m), 1) / k is added and the solve is
// flagged degenerate (never fatal).
AGPSolve solve_coefficients(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                            double tol = 1e-10);

// Coefficient schedule along H(lambda) = (1 - lambda) H_M + lambda H_C.
std::vector<AGPSolve> agp_schedule(const PauliSum& h_c, const PauliSum& h_m,
                                   const OperatorPool& pool,
                                   const std::vector<double>& lambdas);

// hs_inner Gram matrix of the generators (independence check).
Eigen::MatrixXd pool_gram(const OperatorPool& pool);

std::string pool_to_json(const OperatorPool& pool);
std::string schedule_to_json(const OperatorPool& pool, const std::vector<AGPSolve>& schedule);

}  // namespace ccdq
