#include "ccdq/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>

namespace ccdq {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& options) {
  if (x0.empty()) throw std::invalid_argument("nelder_mead: empty start point");
  const std::size_t n = x0.size();

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evals;
    return f(x);
  };

  // n + 1 vertices: x0 plus one step along each coordinate.
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  values[0] = eval(simplex[0]);
  result.x = simplex[0];
  result.fx = values[0];

  auto track_best = [&](const std::vector<double>& x, double fx) {
    if (fx < result.fx) {
      result.fx = fx;
      result.x = x;
    }
  };
  auto budget_left = [&] { return result.evals < options.max_evals; };

  for (std::size_t i = 0; i < n && budget_left(); ++i) {
    simplex[i + 1][i] += options.initial_step;
    values[i + 1] = eval(simplex[i + 1]);
    track_best(simplex[i + 1], values[i + 1]);
  }
  if (!budget_left()) return result;

  // order[0] is the best vertex, order[n] the worst.
  std::vector<std::size_t> order(n + 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto sort_order = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  };

  while (budget_left()) {
    sort_order();
    if (values[order[n]] - values[order[0]] < options.f_tol) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[order[k]][i];
    for (double& c : centroid) c /= static_cast<double>(n);

    const std::size_t worst = order[n];
    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = centroid[i] + t * (centroid[i] - simplex[worst][i]);
      return x;
    };

    std::vector<double> reflected = blend(kReflect);
    double fr = eval(reflected);
    track_best(reflected, fr);

    if (fr < values[order[0]] && budget_left()) {
      std::vector<double> expanded = blend(kExpand);
      double fe = eval(expanded);
      track_best(expanded, fe);
      simplex[worst] = fe < fr ? std::move(expanded) : std::move(reflected);
      values[worst] = std::min(fe, fr);
      continue;
    }
    if (fr < values[order[n - 1]]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
      continue;
    }
    if (!budget_left()) break;

    // Contract toward the better of the worst vertex and its reflection.
    bool outside = fr < values[worst];
    std::vector<double> contracted = blend(outside ? kContract : -kContract);
    double fc = eval(contracted);
    track_best(contracted, fc);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = std::move(contracted);
      values[worst] = fc;
      continue;
    }

    for (std::size_t k = 1; k <= n && budget_left(); ++k) {
      std::size_t idx = order[k];
      for (std::size_t i = 0; i < n; ++i)
        simplex[idx][i] =
            simplex[order[0]][i] + kShrink * (simplex[idx][i] - simplex[order[0]][i]);
      values[idx] = eval(simplex[idx]);
      track_best(simplex[idx], values[idx]);
    }
  }

  return result;
}

}  // namespace ccdq
