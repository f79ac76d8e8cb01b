#include "ceed/penalty.hpp"

#include <algorithm>
#include <sstream>

#include "ceed/error.hpp"

namespace ceed {

std::vector<UnitRatio> unit_ratios(const DispatchProblem& problem, Gas gas) {
  if (problem.gases().count(gas) == 0)
    throw ValidationError("gases", "gas " + std::string(to_string(gas)) + " is not part of the problem");
  std::vector<UnitRatio> ratios;
  ratios.reserve(problem.size());
  for (const auto& unit : problem.units()) {
    const double cost = fuel_cost_unit(unit, unit.p_max);
    const double emission = unit.emissions.at(gas)(unit.p_max);
    if (!(emission > 0.0) || !(cost > 0.0)) {
      std::ostringstream os;
      os << "cost (" << cost << ") and " << to_string(gas) << " emission (" << emission
         << ") at p_max must both be positive";
      throw ValidationError("units[id=" + std::to_string(unit.id) + "]", os.str());
    }
    ratios.push_back({unit.id, cost / emission, unit.p_max});
  }
  return ratios;
}

double select_penalty_factor(std::vector<UnitRatio> ratios, double demand) {
  if (ratios.empty()) throw ValidationError("units", "no unit ratios to rank");
  std::sort(ratios.begin(), ratios.end(), [](const UnitRatio& a, const UnitRatio& b) {
    return a.h != b.h ? a.h < b.h : a.unit_id < b.unit_id;
  });
  double capacity = 0.0;
  for (const auto& r : ratios) {
    capacity += r.p_max;
    if (capacity >= demand) return r.h;
  }
  throw InfeasibleError("total capacity is below the demand");
}

double penalty_factor(const DispatchProblem& problem, Gas gas) {
  return select_penalty_factor(unit_ratios(problem, gas), problem.demand());
}

PenaltyFactors penalty_factors_all(const DispatchProblem& problem) {
  std::map<Gas, double> factors;
  for (Gas gas : problem.gases()) factors[gas] = penalty_factor(problem, gas);
  return PenaltyFactors(problem.demand(), std::move(factors));
}

}  // namespace ceed
