#include "ccdq/pauli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ccdq {

namespace {

Complex i_power(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_qubit_range(int n, int qubit) {
  if (n < 1 || n > 64) throw std::invalid_argument("qubit count must be in [1, 64]");
  if (qubit < 0 || qubit >= n) throw std::invalid_argument("qubit index out of range");
}

void check_same_width(int a, int b) {
  if (a != b) throw std::invalid_argument("operands act on different qubit counts");
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

PauliString PauliString::identity(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("qubit count must be in [1, 64]");
  return PauliString{n, 0, 0, 0};
}

PauliString PauliString::single(int n, char op, int qubit) {
  check_qubit_range(n, qubit);
  PauliString p{n, 0, 0, 0};
  std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (op) {
    case 'I': break;
    case 'X': p.x_bits = bit; break;
    case 'Z': p.z_bits = bit; break;
    case 'Y':
      p.x_bits = bit;
      p.z_bits = bit;
      p.phase_power = 1;
      break;
    default: throw std::invalid_argument("pauli letter must be I, X, Y or Z");
  }
  return p;
}

char PauliString::op_at(int qubit) const {
  check_qubit_range(n_qubits, qubit);
  bool x = (x_bits >> qubit) & 1;
  bool z = (z_bits >> qubit) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

Complex PauliString::phase() const { return i_power(phase_power); }

Complex PauliString::sigma_coeff() const { return i_power(phase_power - y_count()); }

std::string PauliString::str() const {
  static const char* kPhase[] = {"+", "+i*", "-", "-i*"};
  Complex s = sigma_coeff();
  int sp = 0;
  if (std::abs(s.real() - 1.0) < 1e-15) sp = 0;
  else if (std::abs(s.imag() - 1.0) < 1e-15) sp = 1;
  else if (std::abs(s.real() + 1.0) < 1e-15) sp = 2;
  else sp = 3;
  std::string out = kPhase[sp];
  if (is_identity_mask()) return out + "I";
  bool first = true;
  for (int q = 0; q < n_qubits; ++q) {
    char op = op_at(q);
    if (op == 'I') continue;
    if (!first) out += ' ';
    out += op;
    out += std::to_string(q);
    first = false;
  }
  return out;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_width(a.n_qubits, b.n_qubits);
  PauliString c;
  c.n_qubits = a.n_qubits;
  c.x_bits = a.x_bits ^ b.x_bits;
  c.z_bits = a.z_bits ^ b.z_bits;
  // Moving each X of b left across a Z of a on the same qubit flips the sign.
  int p = a.phase_power + b.phase_power + 2 * popcount64(a.z_bits & b.x_bits);
  c.phase_power = ((p % 4) + 4) % 4;
  return c;
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_width(a.n_qubits, b.n_qubits);
  int p = popcount64(a.z_bits & b.x_bits) + popcount64(b.z_bits & a.x_bits);
  return (p % 2) == 0;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 64)
    throw std::invalid_argument("qubit count must be in [1, 64]");
}

Complex PauliSum::coeff(std::uint64_t x, std::uint64_t z) const {
  auto it = terms_.find(Key{x, z});
  return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

PauliSum& PauliSum::add(std::uint64_t x, std::uint64_t z, Complex c) {
  Key key{x, z};
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kCoeffPruneTol) terms_.erase(it);
  return *this;
}

PauliSum& PauliSum::add(const PauliString& p, Complex c) {
  check_same_width(n_qubits_, p.n_qubits);
  return add(p.x_bits, p.z_bits, c * p.sigma_coeff());
}

PauliSum& PauliSum::operator+=(const PauliSum& rhs) {
  check_same_width(n_qubits_, rhs.n_qubits_);
  for (const auto& [key, c] : rhs.terms_) add(key.first, key.second, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& rhs) {
  check_same_width(n_qubits_, rhs.n_qubits_);
  for (const auto& [key, c] : rhs.terms_) add(key.first, key.second, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scalar) {
  for (auto& [key, c] : terms_) c *= scalar;
  return prune();
}

PauliSum operator*(const PauliSum& lhs, const PauliSum& rhs) {
  check_same_width(lhs.n_qubits(), rhs.n_qubits());
  PauliSum out(lhs.n_qubits());
  for (const auto& [ka, ca] : lhs.terms()) {
    PauliString a{lhs.n_qubits(), ka.first, ka.second, popcount64(ka.first & ka.second)};
    for (const auto& [kb, cb] : rhs.terms()) {
      PauliString b{rhs.n_qubits(), kb.first, kb.second, popcount64(kb.first & kb.second)};
      out.add(multiply(a, b), ca * cb);
    }
  }
  return out;
}

PauliSum& PauliSum::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < tol)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [key, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

double PauliSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  check_same_width(a.n_qubits(), b.n_qubits());
  PauliSum out(a.n_qubits());
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      // Anticommuting pairs contribute 2 * (product); commuting pairs cancel.
      int sym = popcount64(ka.second & kb.first) + popcount64(kb.second & ka.first);
      if ((sym % 2) == 0) continue;
      PauliString pa{a.n_qubits(), ka.first, ka.second, popcount64(ka.first & ka.second)};
      PauliString pb{b.n_qubits(), kb.first, kb.second, popcount64(kb.first & kb.second)};
      out.add(multiply(pa, pb), 2.0 * ca * cb);
    }
  }
  return out;
}

Complex hs_inner(const PauliSum& a, const PauliSum& b) {
  check_same_width(a.n_qubits(), b.n_qubits());
  Complex acc{0.0, 0.0};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  bool small_is_a = a.size() <= b.size();
  for (const auto& [key, c] : small.terms()) {
    Complex other = large.coeff(key.first, key.second);
    if (other == Complex{0.0, 0.0}) continue;
    acc += small_is_a ? std::conj(c) * other : std::conj(other) * c;
  }
  return acc;
}

namespace {

Eigen::Matrix2cd letter_matrix(char op) {
  Eigen::Matrix2cd m;
  const Complex i{0.0, 1.0};
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default:  m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::Matrix2cd& b) {
  Eigen::MatrixXcd out(a.rows() * 2, a.cols() * 2);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

Eigen::MatrixXcd dense_letters(int n, std::uint64_t x, std::uint64_t z, int max_qubits) {
  if (n > max_qubits) throw std::domain_error("dense construction refused above the qubit cap");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
  // Assembling from qubit n-1 downward leaves qubit 0 on the least
  // significant axis of the row/column index.
  for (int q = n - 1; q >= 0; --q) {
    bool xb = (x >> q) & 1;
    bool zb = (z >> q) & 1;
    char op = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    m = kron(m, letter_matrix(op));
  }
  return m;
}

}  // namespace

Eigen::MatrixXcd to_dense(const PauliString& p, int max_qubits) {
  return p.sigma_coeff() * dense_letters(p.n_qubits, p.x_bits, p.z_bits, max_qubits);
}

Eigen::MatrixXcd to_dense(const PauliSum& a, int max_qubits) {
  if (a.n_qubits() > max_qubits)
    throw std::domain_error("dense construction refused above the qubit cap");
  Eigen::Index dim = Eigen::Index{1} << a.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, c] : a.terms())
    m += c * dense_letters(a.n_qubits(), key.first, key.second, max_qubits);
  return m;
}

std::string to_text(const PauliSum& a) {
  if (a.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : a.terms()) {
    if (!out.empty()) out += ' ';
    if (std::abs(c.imag()) == 0.0) {
      double re = c.real();
      out += (re < 0 ? '-' : '+');
      out += format_double(std::abs(re));
    } else {
      out += "+(";
      out += format_double(c.real());
      out += ',';
      out += format_double(c.imag());
      out += ')';
    }
    out += '*';
    if (key.first == 0 && key.second == 0) {
      out += 'I';
      continue;
    }
    bool first = true;
    for (int q = 0; q < a.n_qubits(); ++q) {
      bool xb = (key.first >> q) & 1;
      bool zb = (key.second >> q) & 1;
      if (!xb && !zb) continue;
      if (!first) out += ' ';
      out += xb ? (zb ? 'Y' : 'X') : 'Z';
      out += std::to_string(q);
      first = false;
    }
  }
  return out;
}

PauliSum parse_pauli_sum(const std::string& text, int n_qubits) {
  PauliSum out(n_qubits);
  std::istringstream in(text);
  std::string tok;
  bool have_term = false;
  Complex coeff{0.0, 0.0};
  std::uint64_t x = 0, z = 0;
  auto flush = [&] {
    if (have_term) out.add(x, z, coeff);
    have_term = false;
    x = z = 0;
  };
  auto parse_factor = [&](const std::string& f) {
    if (f == "I") return;
    if (f.size() < 2) throw std::invalid_argument("malformed pauli factor: " + f);
    char op = f[0];
    int q = std::stoi(f.substr(1));
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("factor qubit out of range: " + f);
    std::uint64_t bit = std::uint64_t{1} << q;
    if ((x | z) & bit) throw std::invalid_argument("repeated qubit in term: " + f);
    switch (op) {
      case 'X': x |= bit; break;
      case 'Z': z |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      default: throw std::invalid_argument("malformed pauli factor: " + f);
    }
  };
  while (in >> tok) {
    if (tok == "0" && !have_term && out.empty()) continue;
    if (tok[0] == '+' || tok[0] == '-') {
      flush();
      double sign = tok[0] == '-' ? -1.0 : 1.0;
      std::size_t star = tok.find('*');
      if (star == std::string::npos) throw std::invalid_argument("term missing '*': " + tok);
      std::string cs = tok.substr(1, star - 1);
      if (!cs.empty() && cs.front() == '(') {
        std::size_t comma = cs.find(',');
        if (comma == std::string::npos || cs.back() != ')')
          throw std::invalid_argument("malformed complex coefficient: " + tok);
        coeff = sign * Complex{std::strtod(cs.substr(1, comma - 1).c_str(), nullptr),
                               std::strtod(cs.substr(comma + 1, cs.size() - comma - 2).c_str(), nullptr)};
      } else {
        coeff = Complex{sign * std::strtod(cs.c_str(), nullptr), 0.0};
      }
      have_term = true;
      std::string rest = tok.substr(star + 1);
      if (!rest.empty()) parse_factor(rest);
    } else {
      if (!have_term) throw std::invalid_argument("factor before any term: " + tok);
      parse_factor(tok);
    }
  }
  flush();
  return out;
}

}  // namespace ccdq
