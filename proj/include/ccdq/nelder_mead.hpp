#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ccdq {

struct NelderMeadOptions {
  std::uint64_t max_evals = 0;  // hard cap on objective evaluations
  double f_tol = 1e-9;          // simplex value spread declared converged
  double initial_step = 0.25;   // per-coordinate offset of the start simplex
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::uint64_t evals = 0;
  bool converged = false;
};

// Derivative-free downhill simplex with the standard coefficients
// (reflect 1, expand 2, contract 0.5, shrink 0.5). Deterministic: the
// trajectory depends only on x0 and the objective. The initial point is
// always evaluated, even under a zero budget, so the result is usable
// unconditionally; `converged` reports whether the value spread fell
// below f_tol before the budget ran out.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, const NelderMeadOptions& options);

}  // namespace ccdq
