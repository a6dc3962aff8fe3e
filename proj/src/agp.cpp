#include "ccdq/agp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace ccdq {

const char* to_string(GeneratorTag::Kind k) {
  switch (k) {
    case GeneratorTag::Kind::two_body: return "two_body";
    case GeneratorTag::Kind::three_body: return "three_body";
    default: return "other";
  }
}

PauliSum xy_mixer_sum(int n, Topology t) {
  PauliSum s(n);
  for (auto [i, j] : topology_edges(t, n)) {
    std::uint64_t m = (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
    s.add(m, 0, 1.0);
    s.add(m, m, 1.0);
  }
  return s;
}

PauliSum transverse_field_sum(int n) {
  PauliSum s(n);
  for (int i = 0; i < n; ++i) s.add(std::uint64_t{1} << i, 0, 1.0);
  return s;
}

namespace {

std::vector<int> mask_qubits(std::uint64_t m) {
  std::vector<int> out;
  for (int q = 0; q < 64; ++q)
    if ((m >> q) & 1) out.push_back(q);
  return out;
}

}  // namespace

OperatorPool generate_pool(const PauliSum& h_c, const PauliSum& h_m, int max_weight,
                           int nesting_order) {
  if (h_c.n_qubits() != h_m.n_qubits())
    throw std::invalid_argument("hamiltonians act on different qubit counts");
  if (max_weight < 1) throw std::invalid_argument("max_weight must be positive");
  if (nesting_order < 1) throw std::invalid_argument("nesting_order must be positive");
  int n = h_c.n_qubits();

  using Key = PauliSum::Key;
  std::set<Key> support;
  PauliSum first_order = commutator(h_m, h_c);
  for (const auto& [key, c] : first_order.terms()) support.insert(key);

  // Higher orders re-commute the current support strings against every term
  // of H_M + H_C, growing the candidate set without coefficient tracking.
  PauliSum h_both = h_m + h_c;
  std::set<Key> frontier = support;
  for (int level = 1; level < nesting_order; ++level) {
    std::set<Key> next;
    for (const auto& key : frontier) {
      PauliString s{n, key.first, key.second, popcount64(key.first & key.second)};
      for (const auto& [hk, hc] : h_both.terms()) {
        PauliString t{n, hk.first, hk.second, popcount64(hk.first & hk.second)};
        if (commutes(s, t)) continue;
        PauliString prod = multiply(s, t);
        Key pk{prod.x_bits, prod.z_bits};
        if (!support.count(pk)) next.insert(pk);
      }
    }
    support.insert(next.begin(), next.end());
    frontier = std::move(next);
  }

  // (a, b, z_mask) for antisymmetrized pairs; plain keys for the rest.
  std::set<std::tuple<int, int, std::uint64_t>> pair_keys;
  std::set<Key> single_keys;
  for (const auto& [x, z] : support) {
    std::uint64_t x_only = x & ~z;
    std::uint64_t y_mask = x & z;
    std::uint64_t z_only = z & ~x;
    if (popcount64(x_only) == 1 && popcount64(y_mask) == 1) {
      int a = mask_qubits(x_only)[0];
      int b = mask_qubits(y_mask)[0];
      if (a > b) std::swap(a, b);
      if (2 + popcount64(z_only) > max_weight) continue;
      pair_keys.insert({a, b, z_only});
    } else {
      if (popcount64(x | z) > max_weight) continue;
      single_keys.insert({x, z});
    }
  }

  OperatorPool pool;
  pool.n_qubits = n;
  pool.max_weight = max_weight;
  auto add_pair = [&](int a, int b, std::uint64_t zrest) {
    std::uint64_t ab = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);
    PauliSum g(n);
    // X_a Y_b Z_rest - Y_a X_b Z_rest, unit coefficients.
    g.add(ab, (std::uint64_t{1} << b) | zrest, 1.0);
    g.add(ab, (std::uint64_t{1} << a) | zrest, -1.0);
    GeneratorTag tag;
    tag.kind = zrest == 0 ? GeneratorTag::Kind::two_body
                          : (popcount64(zrest) == 1 ? GeneratorTag::Kind::three_body
                                                    : GeneratorTag::Kind::other);
    tag.qubits = {a, b};
    for (int q : mask_qubits(zrest)) tag.qubits.push_back(q);
    pool.generators.push_back(std::move(g));
    pool.tags.push_back(std::move(tag));
  };

  // Two-body first, then three-body (and any wider pair patterns), ordered
  // by index tuples; set iteration provides the (a, b, z) ordering.
  for (const auto& [a, b, zrest] : pair_keys)
    if (zrest == 0) add_pair(a, b, zrest);
  for (const auto& [a, b, zrest] : pair_keys)
    if (zrest != 0) add_pair(a, b, zrest);
  for (const auto& [x, z] : single_keys) {
    PauliSum g(n);
    g.add(x, z, 1.0);
    GeneratorTag tag;
    tag.kind = GeneratorTag::Kind::other;
    tag.qubits = mask_qubits(x | z);
    pool.generators.push_back(std::move(g));
    pool.tags.push_back(std::move(tag));
  }
  return pool;
}

ActionSystem build_action_system(const PauliSum& h_lambda, const PauliSum& dh_dlambda,
                                 const OperatorPool& pool) {
  if (h_lambda.n_qubits() != pool.n_qubits || dh_dlambda.n_qubits() != pool.n_qubits)
    throw std::invalid_argument("hamiltonian and pool qubit counts differ");
  int k = static_cast<int>(pool.size());
  ActionSystem sys;
  sys.m = Eigen::MatrixXd::Zero(k, k);
  sys.v = Eigen::VectorXd::Zero(k);
  if (k == 0) return sys;

  double scale = std::pow(2.0, pool.n_qubits);
  std::vector<PauliSum> c_ops;
  c_ops.reserve(pool.size());
  for (const auto& g : pool.generators) c_ops.push_back(commutator(g, h_lambda));

  // i [H, dH] is Hermitian; v_k is a real trace against Hermitian O_k.
  PauliSum ik = commutator(h_lambda, dh_dlambda) * Complex{0.0, 1.0};
  for (int a = 0; a < k; ++a) {
    Complex va = hs_inner(pool.generators[static_cast<std::size_t>(a)], ik);
    sys.v(a) = scale * va.real();
    for (int b = a; b < k; ++b) {
      // [O, H] is anti-Hermitian, so the normalized inner product equals
      // -Tr(C_a C_b) / 2^n directly.
      Complex mab = hs_inner(c_ops[static_cast<std::size_t>(a)], c_ops[static_cast<std::size_t>(b)]);
      sys.m(a, b) = scale * mab.real();
      sys.m(b, a) = sys.m(a, b);
    }
  }
  return sys;
}

AGPSolve solve_coefficients(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double tol) {
  if (m.rows() != m.cols() || m.rows() != v.size())
    throw std::invalid_argument("system dimensions disagree");
  AGPSolve out;
  out.m = m;
  out.v = v;
  Eigen::Index k = v.size();
  out.coefficients = Eigen::VectorXd::Zero(k);
  if (k == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  double eig_min = eig.eigenvalues().minCoeff();
  double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::MatrixXd work = m;
  if (eig_min < tol * std::max(norm, 1.0)) {
    out.degenerate = true;
    out.regularization = tol * std::max(m.trace(), 1.0) / static_cast<double>(k);
    work.diagonal().array() += out.regularization;
  }
  out.coefficients = work.ldlt().solve(v);
  out.residual = (m * out.coefficients - v).norm();
  return out;
}

std::vector<AGPSolve> agp_schedule(const PauliSum& h_c, const PauliSum& h_m,
                                   const OperatorPool& pool,
                                   const std::vector<double>& lambdas) {
  PauliSum dh = h_c - h_m;
  std::vector<AGPSolve> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    PauliSum h = h_m * Complex{1.0 - lambda, 0.0} + h_c * Complex{lambda, 0.0};
    auto sys = build_action_system(h, dh, pool);
    auto solve = solve_coefficients(sys.m, sys.v);
    solve.lambda = lambda;
    out.push_back(std::move(solve));
  }
  return out;
}

Eigen::MatrixXd pool_gram(const OperatorPool& pool) {
  Eigen::Index k = static_cast<Eigen::Index>(pool.size());
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      g(a, b) = hs_inner(pool.generators[static_cast<std::size_t>(a)],
                         pool.generators[static_cast<std::size_t>(b)])
                    .real();
  return g;
}

std::string pool_to_json(const OperatorPool& pool) {
  nlohmann::ordered_json j;
  j["n_qubits"] = pool.n_qubits;
  j["max_weight"] = pool.max_weight;
  auto gens = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    nlohmann::ordered_json g;
    g["kind"] = to_string(pool.tags[i].kind);
    g["qubits"] = pool.tags[i].qubits;
    g["terms"] = to_text(pool.generators[i]);
    gens.push_back(std::move(g));
  }
  j["generators"] = std::move(gens);
  return j.dump(2) + "\n";
}

std::string schedule_to_json(const OperatorPool& pool, const std::vector<AGPSolve>& schedule) {
  nlohmann::ordered_json j;
  j["pool_size"] = pool.size();
  auto points = nlohmann::ordered_json::array();
  for (const auto& s : schedule) {
    nlohmann::ordered_json p;
    p["lambda"] = s.lambda;
    std::vector<double> c(s.coefficients.data(), s.coefficients.data() + s.coefficients.size());
    p["coefficients"] = c;
    p["residual"] = s.residual;
    p["degenerate"] = s.degenerate;
    p["regularization"] = s.regularization;
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j.dump(2) + "\n";
}

}  // namespace ccdq
