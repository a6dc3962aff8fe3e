#include "ccdq/portfolio.hpp"

#include <cstdio>
#include <random>

#include "doctest.h"
#include "ccdq/rng.hpp"
#include "test_support.hpp"

using namespace ccdq;

TEST_CASE("generation is deterministic and documents its draw order") {
  auto a = random_instance(42, 8, 3, 0.5);
  auto b = random_instance(42, 8, 3, 0.5);
  CHECK(a.mu == b.mu);
  CHECK(a.sigma == b.sigma);
  CHECK(*a.seed == 42);
  CHECK(*a.generator_id == kGeneratorId);

  auto c = random_instance(43, 8, 3, 0.5);
  CHECK(a.mu != c.mu);

  // First n stream draws are the mu entries in asset order.
  std::mt19937_64 gen(42);
  for (int i = 0; i < 8; ++i) CHECK(a.mu[static_cast<std::size_t>(i)] == uniform01(gen));
}

TEST_CASE("generated covariance is symmetric positive semidefinite") {
  for (std::uint64_t seed : {1ULL, 7ULL, 100ULL, 109ULL}) {
    auto inst = random_instance(seed, 12, 4, 0.5);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) CHECK(inst.sigma_at(i, j) == inst.sigma_at(j, i));
    CHECK(min_sigma_eigenvalue(inst) >= -1e-8);
  }
}

TEST_CASE("spin encoding reproduces the direct cost on every bitstring") {
  for (std::uint64_t seed : {3ULL, 11ULL, 21ULL}) {
    auto inst = random_instance(seed, 6, 2, 0.5);
    auto ising = to_ising(inst);
    for (std::uint64_t x = 0; x < 64; ++x) {
      CHECK(cost_of_bitstring(ising, x) ==
            doctest::Approx(classical_cost(inst, x)).epsilon(1e-9));
    }
  }
}

TEST_CASE("penalty encoding reproduces the direct penalized cost") {
  auto inst = random_instance(5, 6, 2, 0.5);
  for (double alpha : {0.7, default_penalty_alpha(inst)}) {
    auto ising = to_penalty_ising(inst, alpha);
    for (std::uint64_t x = 0; x < 64; ++x) {
      CHECK(cost_of_bitstring(ising, x) ==
            doctest::Approx(penalized_cost(inst, x, alpha)).epsilon(1e-9));
    }
  }
}

TEST_CASE("default penalty weight separates infeasible configurations") {
  for (std::uint64_t seed : {2ULL, 9ULL, 31ULL}) {
    auto inst = random_instance(seed, 8, 3, 0.5);
    double alpha = default_penalty_alpha(inst);
    CHECK(alpha >= 1.0);
    auto ising = to_ising(inst);
    auto ext = exact_extrema(ising, 8, 3);
    double best_infeasible = 1e300;
    for (std::uint64_t x = 0; x < 256; ++x) {
      if (popcount64(x) == 3) continue;
      best_infeasible = std::min(best_infeasible, penalized_cost(inst, x, alpha));
    }
    CHECK(best_infeasible > ext.e_min);
  }
}

TEST_CASE("exact extrema agree with full enumeration") {
  for (std::uint64_t seed : {13ULL, 17ULL}) {
    auto inst = random_instance(seed, 8, 3, 0.5);
    auto ising = to_ising(inst);
    double lo = 1e300, hi = -1e300;
    std::uint64_t arg = 0;
    for (std::uint64_t x = 0; x < 256; ++x) {
      if (popcount64(x) != 3) continue;
      double e = classical_cost(inst, x);
      if (e < lo) {
        lo = e;
        arg = x;
      }
      hi = std::max(hi, e);
    }
    auto ext = exact_extrema(ising, 8, 3);
    CHECK(ext.e_min == doctest::Approx(lo).epsilon(1e-10));
    CHECK(ext.e_max == doctest::Approx(hi).epsilon(1e-10));
    CHECK(ext.argmin == arg);
    CHECK(popcount64(ext.argmin) == 3);
  }
}

TEST_CASE("extrema ties resolve to the lexicographically smallest bitstring") {
  // Flat landscape: every weight-2 configuration has the same energy, so the
  // winner must be "0011" (assets 2 and 3, index 0b1100).
  IsingModel flat;
  flat.n_qubits = 4;
  flat.offset = 1.0;
  flat.fields.assign(4, 0.0);
  auto ext = exact_extrema(flat, 4, 2);
  CHECK(ext.argmin == 0b1100);
  CHECK(index_to_bits(ext.argmin, 4) == "0011");
}

TEST_CASE("extrema handle degenerate budgets and refuse huge enumerations") {
  auto inst = random_instance(1, 6, 2, 0.5);
  auto ising = to_ising(inst);
  auto all = exact_extrema(ising, 6, 6);
  CHECK(all.e_min == doctest::Approx(classical_cost(inst, 63)).epsilon(1e-10));
  auto none = exact_extrema(ising, 6, 0);
  CHECK(none.e_min == doctest::Approx(classical_cost(inst, 0)).epsilon(1e-10));

  IsingModel big;
  big.n_qubits = 34;
  big.fields.assign(34, 0.0);
  CHECK_THROWS_AS(exact_extrema(big, 34, 17), std::domain_error);
}

TEST_CASE("pauli rendering of the ising model is diagonal and consistent") {
  auto inst = random_instance(23, 5, 2, 0.5);
  auto ising = to_ising(inst);
  auto op = ising_to_pauli(ising);
  CHECK(op.is_hermitian());
  for (const auto& [key, c] : op.terms()) CHECK(key.first == 0);  // Z-only
  auto dense = to_dense(op);
  for (std::uint64_t x = 0; x < 32; ++x) {
    CHECK(dense(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)).real() ==
          doctest::Approx(cost_of_bitstring(ising, x)).epsilon(1e-10));
    CHECK(std::abs(dense(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)).imag()) < 1e-14);
  }
}

TEST_CASE("instance JSON round-trips and validates") {
  auto inst = random_instance(77, 7, 3, 0.25);
  auto text = instance_to_json(inst);
  auto back = instance_from_json(text);
  CHECK(back.n_assets == inst.n_assets);
  CHECK(back.budget == inst.budget);
  CHECK(back.risk_aversion == inst.risk_aversion);
  CHECK(back.mu == inst.mu);
  CHECK(back.sigma == inst.sigma);
  CHECK(*back.seed == 77);
  CHECK(*back.generator_id == kGeneratorId);

  std::string path = "/tmp/ccdq_test_instance.json";
  save_instance(inst, path);
  auto loaded = load_instance(path);
  CHECK(loaded.sigma == inst.sigma);
  std::remove(path.c_str());

  CHECK_THROWS_AS(instance_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(instance_from_json("not json"), std::invalid_argument);

  auto bad = inst;
  bad.budget = 7;
  CHECK_THROWS_AS(instance_to_json(bad), std::invalid_argument);
  auto askew = inst;
  askew.sigma[1] += 1.0;
  CHECK_THROWS_AS(askew.validate(), std::invalid_argument);
}

TEST_CASE("default penalty weight formula") {
  PortfolioInstance inst;
  inst.n_assets = 3;
  inst.budget = 1;
  inst.risk_aversion = 0.5;
  inst.mu = {0.2, -0.4, 0.1};
  inst.sigma = {1.0, 0.1, 0.0, 0.1, 2.0, 0.3, 0.0, 0.3, 1.5};
  CHECK(default_penalty_alpha(inst) == doctest::Approx(0.4 + 0.5 * 2.0 * 3).epsilon(1e-12));
}
