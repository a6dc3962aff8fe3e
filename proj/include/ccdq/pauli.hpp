#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "ccdq/bits.hpp"

namespace ccdq {

using Complex = std::complex<double>;

// Coefficients with magnitude below this are dropped from PauliSum storage.
inline constexpr double kCoeffPruneTol = 1e-12;

// Qubit count above which dense-matrix construction refuses to run.
inline constexpr int kDenseOracleCap = 6;

// Phase-tracked Pauli string on up to 64 qubits.
//
// Stored value = i^phase_power * prod_q X_q^{x_bit} Z_q^{z_bit}, with X
// written left of Z on every qubit. A qubit with both bits set is therefore
// -i*Y under the fixed convention Y = i X Z. phase_power stays reduced
// mod 4, so comparing the four fields compares operators.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x_bits = 0;
  std::uint64_t z_bits = 0;
  int phase_power = 0;

  static PauliString identity(int n);
  // op is one of 'I', 'X', 'Y', 'Z'; a 'Y' stores x=z=1 with phase_power 1.
  static PauliString single(int n, char op, int qubit);

  int y_count() const { return popcount64(x_bits & z_bits); }
  int weight() const { return popcount64(x_bits | z_bits); }
  bool is_identity_mask() const { return x_bits == 0 && z_bits == 0; }

  // Letter at the given qubit, ignoring the global phase.
  char op_at(int qubit) const;

  Complex phase() const;  // i^phase_power

  // value = sigma_coeff() * (tensor of I/X/Y/Z letters), i.e. the scalar
  // relating the stored XZ form to the Hermitian letter form.
  Complex sigma_coeff() const;

  // Self-adjoint exactly when the tracked phase matches the Y parity.
  bool is_hermitian() const { return ((phase_power - y_count()) % 2) == 0; }

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

// Product a*b with the phase picked up by commuting b's X block through
// a's Z block.
PauliString multiply(const PauliString& a, const PauliString& b);

// Two strings either commute or anticommute; this reports which.
bool commutes(const PauliString& a, const PauliString& b);

// Sparse real-linear combination of Pauli strings. Terms are keyed by
// (x_bits, z_bits) and the stored coefficient multiplies the Hermitian
// letter form of that key (so a Hermitian sum has real coefficients).
// Map ordering makes iteration, rendering and arithmetic deterministic.
class PauliSum {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  using TermMap = std::map<Key, Complex>;

  PauliSum() = default;
  explicit PauliSum(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  // Coefficient of the letter-form string with the given masks (0 if absent).
  Complex coeff(std::uint64_t x, std::uint64_t z) const;
  Complex trace_part() const { return coeff(0, 0); }

  // Accumulate c * (letter form of the masks). Entries whose accumulated
  // magnitude falls below kCoeffPruneTol are removed.
  PauliSum& add(std::uint64_t x, std::uint64_t z, Complex c);
  // Accumulate c * p; p's tracked phase folds into the stored coefficient.
  PauliSum& add(const PauliString& p, Complex c = 1.0);

  PauliSum& operator+=(const PauliSum& rhs);
  PauliSum& operator-=(const PauliSum& rhs);
  PauliSum& operator*=(Complex scalar);

  friend PauliSum operator+(PauliSum lhs, const PauliSum& rhs) { return lhs += rhs; }
  friend PauliSum operator-(PauliSum lhs, const PauliSum& rhs) { return lhs -= rhs; }
  friend PauliSum operator*(PauliSum lhs, Complex scalar) { return lhs *= scalar; }
  friend PauliSum operator*(Complex scalar, PauliSum rhs) { return rhs *= scalar; }

  // Full operator product (term-by-term string multiplication).
  friend PauliSum operator*(const PauliSum& lhs, const PauliSum& rhs);

  PauliSum& prune(double tol = kCoeffPruneTol);

  // Hermitian iff every stored coefficient is real to within tol, since the
  // letter-form basis strings are themselves self-adjoint.
  bool is_hermitian(double tol = 1e-10) const;

  double max_abs_coeff() const;

 private:
  int n_qubits_ = 0;
  TermMap terms_;
};

// [a, b] with pairwise products; anticommuting string pairs contribute
// twice their product, commuting pairs cancel exactly and are skipped.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

// Normalized Hilbert-Schmidt inner product Tr(a^dagger b) / 2^n, evaluated
// through Pauli orthogonality (letter strings are orthonormal under it).
Complex hs_inner(const PauliSum& a, const PauliSum& b);

// Exact dense matrices by Kronecker assembly, qubit 0 at the least
// significant index bit. Intended for small-system oracles; throws
// std::domain_error above max_qubits.
Eigen::MatrixXcd to_dense(const PauliString& p, int max_qubits = kDenseOracleCap);
Eigen::MatrixXcd to_dense(const PauliSum& a, int max_qubits = kDenseOracleCap);

// Text form, e.g. "+0.5*Z0 Z1 -0.25*X0 Y2 Z3 +(0,1)*Y1". One token per
// factor, factors ascending by qubit, terms in key order, coefficients
// printed to round-trip exactly; the empty sum renders as "0".
std::string to_text(const PauliSum& a);
PauliSum parse_pauli_sum(const std::string& text, int n_qubits);

}  // namespace ccdq
