#pragma once

#include <span>

#include "ceed/model.hpp"

namespace ceed {

void clamp_to_limits(const DispatchProblem& problem, std::span<double> powers);

// Projects `powers` onto the limit box and the power balance.
//
// Lossless: scale by demand/sum(p) and re-clamp, up to 10 rounds; any remainder goes
// to the unit with the most headroom in the needed direction (repeated until the
// remainder is gone). With a loss matrix the target demand + P_L(p) is refreshed by
// fixed-point iteration, up to 20 rounds.
//
// Returns the final balance residual (MW).
double repair_balance(const DispatchProblem& problem, std::span<double> powers);

}  // namespace ceed
