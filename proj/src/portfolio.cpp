#include "ccdq/portfolio.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "ccdq/rng.hpp"

namespace ccdq {

void PortfolioInstance::validate() const {
  if (n_assets < 1 || n_assets > 64)
    throw std::invalid_argument("n_assets must be in [1, 64]");
  if (budget <= 0 || budget >= n_assets)
    throw std::invalid_argument("budget must satisfy 0 < budget < n_assets");
  if (mu.size() != static_cast<std::size_t>(n_assets))
    throw std::invalid_argument("mu size does not match n_assets");
  if (sigma.size() != static_cast<std::size_t>(n_assets) * static_cast<std::size_t>(n_assets))
    throw std::invalid_argument("sigma size does not match n_assets^2");
  for (int i = 0; i < n_assets; ++i)
    for (int j = i + 1; j < n_assets; ++j)
      if (std::abs(sigma_at(i, j) - sigma_at(j, i)) > 1e-10)
        throw std::invalid_argument("sigma is not symmetric");
}

PortfolioInstance random_instance(std::uint64_t seed, int n_assets, int budget,
                                  double risk_aversion) {
  if (n_assets < 1 || n_assets > 64)
    throw std::invalid_argument("n_assets must be in [1, 64]");
  PortfolioInstance inst;
  inst.n_assets = n_assets;
  inst.budget = budget;
  inst.risk_aversion = risk_aversion;
  inst.seed = seed;
  inst.generator_id = kGeneratorId;
  std::mt19937_64 gen(seed);
  std::size_t n = static_cast<std::size_t>(n_assets);
  inst.mu.resize(n);
  for (auto& m : inst.mu) m = uniform01(gen);
  std::vector<double> g(n * n);
  for (auto& v : g) v = standard_normal(gen);
  inst.sigma.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += g[i * n + k] * g[j * n + k];
      inst.sigma[i * n + j] = acc / static_cast<double>(n_assets);
    }
  }
  inst.validate();
  return inst;
}

IsingModel to_ising(const PortfolioInstance& inst) {
  inst.validate();
  int n = inst.n_assets;
  double q = inst.risk_aversion;
  IsingModel m;
  m.n_qubits = n;
  m.fields.assign(static_cast<std::size_t>(n), 0.0);
  // x_i = (1 - Z_i)/2 turns q x^T sigma x - mu^T x into the terms below;
  // diagonal sigma entries fold into fields because x_i^2 = x_i.
  for (int i = 0; i < n; ++i) {
    m.offset += 0.5 * q * inst.sigma_at(i, i) - 0.5 * inst.mu[i];
    m.fields[static_cast<std::size_t>(i)] +=
        0.5 * inst.mu[i] - 0.5 * q * inst.sigma_at(i, i);
    for (int j = i + 1; j < n; ++j) {
      double pair = inst.sigma_at(i, j) + inst.sigma_at(j, i);
      m.offset += 0.25 * q * pair;
      m.fields[static_cast<std::size_t>(i)] -= 0.25 * q * pair;
      m.fields[static_cast<std::size_t>(j)] -= 0.25 * q * pair;
      double coupling = 0.25 * q * pair;
      if (std::abs(coupling) > 0.0) m.couplings[{i, j}] = coupling;
    }
  }
  return m;
}

double default_penalty_alpha(const PortfolioInstance& inst) {
  double max_mu = 0.0;
  for (double v : inst.mu) max_mu = std::max(max_mu, std::abs(v));
  double max_sigma = 0.0;
  for (double v : inst.sigma) max_sigma = std::max(max_sigma, std::abs(v));
  return std::max(1.0, max_mu + inst.risk_aversion * max_sigma * inst.n_assets);
}

IsingModel to_penalty_ising(const PortfolioInstance& inst, double alpha) {
  IsingModel m = to_ising(inst);
  int n = inst.n_assets;
  int b = inst.budget;
  // alpha (sum_i x_i - B)^2 in spin variables: constant, uniform field and
  // uniform coupling on every pair.
  m.offset += 0.25 * alpha * (static_cast<double>(n - 2 * b) * (n - 2 * b) + n);
  for (int i = 0; i < n; ++i) {
    m.fields[static_cast<std::size_t>(i)] -= 0.5 * alpha * (n - 2 * b);
    for (int j = i + 1; j < n; ++j) m.couplings[{i, j}] += 0.5 * alpha;
  }
  return m;
}

double cost_of_bitstring(const IsingModel& ising, std::uint64_t x) {
  auto spin = [&](int i) { return ((x >> i) & 1) ? -1.0 : 1.0; };
  double e = ising.offset;
  for (int i = 0; i < ising.n_qubits; ++i)
    e += ising.fields[static_cast<std::size_t>(i)] * spin(i);
  for (const auto& [pair, j] : ising.couplings)
    e += j * spin(pair.first) * spin(pair.second);
  return e;
}

double classical_cost(const PortfolioInstance& inst, std::uint64_t x) {
  double risk = 0.0, ret = 0.0;
  for (int i = 0; i < inst.n_assets; ++i) {
    if (!((x >> i) & 1)) continue;
    ret += inst.mu[static_cast<std::size_t>(i)];
    for (int j = 0; j < inst.n_assets; ++j)
      if ((x >> j) & 1) risk += inst.sigma_at(i, j);
  }
  return inst.risk_aversion * risk - ret;
}

double penalized_cost(const PortfolioInstance& inst, std::uint64_t x, double alpha) {
  double w = popcount64(x) - inst.budget;
  return classical_cost(inst, x) + alpha * w * w;
}

Extrema exact_extrema(const IsingModel& ising, int n, int budget) {
  if (budget < 0 || budget > n)
    throw std::invalid_argument("budget must be in [0, n]");
  std::uint64_t count = binomial(n, budget);
  if (count > kEnumerationGuard)
    throw std::domain_error("feasible set too large for exact enumeration");
  Extrema ext;
  std::uint64_t x = lowest_weight_index(budget);
  ext.e_min = ext.e_max = cost_of_bitstring(ising, x);
  ext.argmin = x;
  for (std::uint64_t k = 1; k < count; ++k) {
    x = next_same_weight(x);
    double e = cost_of_bitstring(ising, x);
    if (e < ext.e_min || (e == ext.e_min && lex_less(x, ext.argmin, n))) {
      ext.e_min = e;
      ext.argmin = x;
    }
    ext.e_max = std::max(ext.e_max, e);
  }
  return ext;
}

PauliSum ising_to_pauli(const IsingModel& ising) {
  PauliSum s(ising.n_qubits);
  s.add(0, 0, ising.offset);
  for (int i = 0; i < ising.n_qubits; ++i)
    s.add(0, std::uint64_t{1} << i, ising.fields[static_cast<std::size_t>(i)]);
  for (const auto& [pair, j] : ising.couplings)
    s.add(0, (std::uint64_t{1} << pair.first) | (std::uint64_t{1} << pair.second), j);
  return s;
}

double min_sigma_eigenvalue(const PortfolioInstance& inst) {
  Eigen::Map<const Eigen::MatrixXd> m(inst.sigma.data(), inst.n_assets, inst.n_assets);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  return solver.eigenvalues().minCoeff();
}

std::string instance_to_json(const PortfolioInstance& inst) {
  inst.validate();
  nlohmann::ordered_json j;
  j["n_assets"] = inst.n_assets;
  j["budget"] = inst.budget;
  j["risk_aversion"] = inst.risk_aversion;
  j["mu"] = inst.mu;
  auto rows = nlohmann::ordered_json::array();
  for (int i = 0; i < inst.n_assets; ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int k = 0; k < inst.n_assets; ++k) row.push_back(inst.sigma_at(i, k));
    rows.push_back(row);
  }
  j["sigma"] = rows;
  if (inst.seed) j["seed"] = *inst.seed;
  if (inst.generator_id) j["generator_id"] = *inst.generator_id;
  return j.dump(2) + "\n";
}

PortfolioInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON parse error: ") + e.what());
  }
  PortfolioInstance inst;
  try {
    inst.n_assets = j.at("n_assets").get<int>();
    inst.budget = j.at("budget").get<int>();
    inst.risk_aversion = j.at("risk_aversion").get<double>();
    inst.mu = j.at("mu").get<std::vector<double>>();
    const auto& rows = j.at("sigma");
    for (const auto& row : rows)
      for (const auto& v : row) inst.sigma.push_back(v.get<double>());
    if (j.contains("seed")) inst.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("generator_id")) inst.generator_id = j.at("generator_id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON field error: ") + e.what());
  }
  inst.validate();
  return inst;
}

void save_instance(const PortfolioInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

PortfolioInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace ccdq
