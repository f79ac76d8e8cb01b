#pragma once

#include <vector>

#include "ceed/model.hpp"

namespace ceed {

// Cost-to-emission ratio of one unit evaluated at its maximum output.
struct UnitRatio {
  int unit_id = 0;
  double h = 0.0;      // $/kg
  double p_max = 0.0;  // MW
};

// One ratio per unit: fuel cost at p_max divided by the gas emission at p_max.
// Throws ValidationError naming the unit when either side is not positive.
std::vector<UnitRatio> unit_ratios(const DispatchProblem& problem, Gas gas);

// Ranks the ratios ascending (ties broken by unit id), accumulates p_max in that
// order and returns the ratio at which the running capacity first reaches the
// demand.
double penalty_factor(const DispatchProblem& problem, Gas gas);

// Same selection on a precomputed ratio list.
double select_penalty_factor(std::vector<UnitRatio> ratios, double demand);

PenaltyFactors penalty_factors_all(const DispatchProblem& problem);

}  // namespace ceed
