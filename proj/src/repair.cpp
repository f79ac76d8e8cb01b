#include "ceed/repair.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ceed/error.hpp"

namespace ceed {

namespace {

constexpr int kScalingRounds = 10;
constexpr int kLossRounds = 20;
// Internal target, well below kBalanceTolerance.
constexpr double kRepairTolerance = 1e-9;

double sum(std::span<const double> p) { return std::accumulate(p.begin(), p.end(), 0.0); }

void repair_to_target(const DispatchProblem& problem, std::span<double> powers, double target) {
  clamp_to_limits(problem, powers);
  for (int round = 0; round < kScalingRounds; ++round) {
    const double total = sum(powers);
    if (std::abs(target - total) <= kRepairTolerance || total <= 0.0) break;
    const double scale = target / total;
    for (double& p : powers) p *= scale;
    clamp_to_limits(problem, powers);
  }
  // Each pass either closes the gap or saturates one unit, so n passes suffice.
  for (std::size_t pass = 0; pass <= powers.size(); ++pass) {
    const double remainder = target - sum(powers);
    if (std::abs(remainder) <= kRepairTolerance) break;
    std::size_t best = 0;
    double best_room = -1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      const auto& unit = problem.unit(i);
      const double room = remainder > 0.0 ? unit.p_max - powers[i] : powers[i] - unit.p_min;
      if (room > best_room) {
        best_room = room;
        best = i;
      }
    }
    if (best_room <= 0.0) break;
    const double shift = std::min(std::abs(remainder), best_room);
    powers[best] += remainder > 0.0 ? shift : -shift;
  }
}

}  // namespace

void clamp_to_limits(const DispatchProblem& problem, std::span<double> powers) {
  if (powers.size() != problem.size()) throw DimensionError("power vector size mismatch");
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const auto& unit = problem.unit(i);
    powers[i] = std::clamp(powers[i], unit.p_min, unit.p_max);
  }
}

double repair_balance(const DispatchProblem& problem, std::span<double> powers) {
  if (problem.lossless()) {
    repair_to_target(problem, powers, problem.demand());
    return balance_residual(problem, powers);
  }
  const auto& b = *problem.losses();
  const double capacity = problem.total_p_max();
  for (int round = 0; round < kLossRounds; ++round) {
    const double target = std::min(problem.demand() + transmission_loss(powers, b), capacity);
    repair_to_target(problem, powers, target);
    if (std::abs(balance_residual(problem, powers)) <= kRepairTolerance) break;
  }
  return balance_residual(problem, powers);
}

}  // namespace ceed
