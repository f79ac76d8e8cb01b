#pragma once

#include <vector>

#include "ceed/model.hpp"

namespace ceed::oracle {

struct LambdaResult {
  double lambda = 0.0;  // system incremental cost, $/MWh
  std::vector<double> powers;
  int iterations = 0;
  double residual = 0.0;  // sum(p) - demand, MW
};

// Per-unit scalarized curves k1*F_i + k2*sum_g h_g*E_g,i.
std::vector<Quadratic> scalarized_curves(const DispatchProblem& problem, const PenaltyFactors& h,
                                         int k1, int k2);

// Equal-incremental-cost dispatch by bisection on lambda:
//   p_i(lambda) = clamp((lambda - b_i) / (2 c_i), p_min, p_max)
// with b, c the scalarized linear and quadratic coefficients. Stops when
// |sum(p) - demand| <= tol or after 200 halvings, then takes one Newton step
// on lambda over the units inside their limits.
// Lossless problems with strictly positive scalarized quadratic terms only.
LambdaResult lambda_solve(const DispatchProblem& problem, const PenaltyFactors& h, int k1, int k2,
                          double tol = 1e-6);

// Uses the problem's own k1/k2.
LambdaResult lambda_solve(const DispatchProblem& problem, const PenaltyFactors& h,
                          double tol = 1e-6);

// Exhaustive search over a grid of the first N-1 units (N <= 3, lossless); the
// last unit takes up the balance. Returns the minimizer of combined_objective.
DispatchSolution grid_search(const DispatchProblem& problem, const PenaltyFactors& h,
                             double resolution);

}  // namespace ceed::oracle
