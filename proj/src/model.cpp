#include "ceed/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ceed/error.hpp"

namespace ceed {

namespace {

void require_size(const DispatchProblem& problem, std::span<const double> powers) {
  if (powers.size() != problem.size()) {
    std::ostringstream os;
    os << "expected " << problem.size() << " powers, got " << powers.size();
    throw DimensionError(os.str());
  }
}

bool same_demand(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string unit_field(const GeneratorUnit& unit, const char* name) {
  return "units[id=" + std::to_string(unit.id) + "]." + name;
}

}  // namespace

std::string_view to_string(Gas gas) {
  switch (gas) {
    case Gas::NOx:
      return "nox";
    case Gas::COx:
      return "cox";
    case Gas::SOx:
      return "sox";
  }
  return "?";
}

std::optional<Gas> parse_gas(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Gas gas : kAllGases) {
    if (lower == to_string(gas)) return gas;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LossMatrix

LossMatrix::LossMatrix(const std::vector<std::vector<double>>& rows) {
  n_ = rows.size();
  data_.reserve(n_ * n_);
  double largest = 0.0;
  for (const auto& row : rows) {
    if (row.size() != n_) throw DimensionError("loss matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v)) throw ValidationError("b_matrix", "non-finite entry");
      largest = std::max(largest, std::abs(v));
      data_.push_back(v);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double& upper = data_[i * n_ + j];
      double& lower = data_[j * n_ + i];
      if (upper == lower) continue;
      if (std::abs(upper - lower) > kSymmetryTolerance * largest) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << ',' << j << "): " << upper << " vs " << lower;
        throw ValidationError("b_matrix", os.str());
      }
      const double mean = 0.5 * (upper + lower);
      upper = lower = mean;
      symmetrized_ = true;
    }
  }
}

LossMatrix LossMatrix::symmetrized(const std::vector<std::vector<double>>& rows) {
  LossMatrix m;
  m.n_ = rows.size();
  for (const auto& row : rows) {
    if (row.size() != m.n_) throw DimensionError("loss matrix must be square");
  }
  m.data_.resize(m.n_ * m.n_);
  for (std::size_t i = 0; i < m.n_; ++i) {
    for (std::size_t j = 0; j < m.n_; ++j) {
      m.data_[i * m.n_ + j] = 0.5 * (rows[i][j] + rows[j][i]);
      if (rows[i][j] != rows[j][i]) m.symmetrized_ = true;
    }
  }
  return m;
}

LossMatrix LossMatrix::zero(std::size_t n) {
  LossMatrix m;
  m.n_ = n;
  m.data_.assign(n * n, 0.0);
  return m;
}

std::vector<std::vector<double>> LossMatrix::rows() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// DispatchProblem

DispatchProblem::DispatchProblem(std::vector<GeneratorUnit> units, double demand,
                                 std::optional<LossMatrix> losses, std::set<Gas> gases, int k1,
                                 int k2)
    : units_(std::move(units)),
      demand_(demand),
      losses_(std::move(losses)),
      gases_(std::move(gases)),
      k1_(k1),
      k2_(k2) {
  if (units_.empty()) throw ValidationError("units", "at least one unit is required");
  std::set<int> ids;
  for (const auto& unit : units_) {
    if (!ids.insert(unit.id).second)
      throw ValidationError(unit_field(unit, "id"), "duplicate unit id");
    if (!std::isfinite(unit.p_min) || !std::isfinite(unit.p_max))
      throw ValidationError(unit_field(unit, "p_min"), "limits must be finite");
    if (unit.p_min < 0.0) throw ValidationError(unit_field(unit, "p_min"), "must be >= 0");
    if (!(unit.p_min < unit.p_max))
      throw ValidationError(unit_field(unit, "p_max"), "p_min must be below p_max");
    for (Gas gas : gases_) {
      if (unit.emissions.count(gas) == 0)
        throw ValidationError(unit_field(unit, "emissions"),
                              "missing coefficients for gas " + std::string(to_string(gas)));
    }
  }
  if (losses_ && losses_->size() != units_.size())
    throw DimensionError("loss matrix dimension does not match unit count");
  if ((k1_ != 0 && k1_ != 1) || (k2_ != 0 && k2_ != 1))
    throw ValidationError("k1/k2", "objective switches must be 0 or 1");
  if (k1_ + k2_ < 1) throw ValidationError("k1/k2", "at least one objective must be active");
  if (!std::isfinite(demand_)) throw ValidationError("demand", "must be finite");
  if (demand_ < total_p_min() || demand_ > total_p_max()) {
    std::ostringstream os;
    os << "demand " << demand_ << " MW outside [" << total_p_min() << ", " << total_p_max()
       << "] MW";
    throw InfeasibleError(os.str());
  }
}

double DispatchProblem::total_p_min() const noexcept {
  double s = 0.0;
  for (const auto& u : units_) s += u.p_min;
  return s;
}

double DispatchProblem::total_p_max() const noexcept {
  double s = 0.0;
  for (const auto& u : units_) s += u.p_max;
  return s;
}

DispatchProblem DispatchProblem::with_demand(double demand) const {
  return DispatchProblem(units_, demand, losses_, gases_, k1_, k2_);
}

DispatchProblem DispatchProblem::with_weights(int k1, int k2) const {
  return DispatchProblem(units_, demand_, losses_, gases_, k1, k2);
}

// ---------------------------------------------------------------------------
// PenaltyFactors

PenaltyFactors::PenaltyFactors(double demand, std::map<Gas, double> factors)
    : demand_(demand), factors_(std::move(factors)) {
  for (const auto& [gas, h] : factors_) {
    if (!(h > 0.0) || !std::isfinite(h))
      throw ValidationError("h." + std::string(to_string(gas)), "penalty factor must be > 0");
  }
}

double PenaltyFactors::at(Gas gas) const {
  auto it = factors_.find(gas);
  if (it == factors_.end())
    throw ValidationError("h." + std::string(to_string(gas)), "no penalty factor for this gas");
  return it->second;
}

void PenaltyFactors::check_compatible(const DispatchProblem& problem) const {
  if (!same_demand(demand_, problem.demand())) {
    std::ostringstream os;
    os << "factors were computed for " << demand_ << " MW but the problem demand is "
       << problem.demand() << " MW";
    throw ValidationError("h.demand", os.str());
  }
  for (Gas gas : problem.gases()) at(gas);
}

bool DispatchSolution::feasible(double balance_tolerance) const {
  return limit_violations.empty() && std::abs(balance_residual) <= balance_tolerance;
}

// ---------------------------------------------------------------------------
// Evaluation

double fuel_cost_unit(const GeneratorUnit& unit, double p) { return unit.cost(p); }

double total_fuel_cost(const DispatchProblem& problem, std::span<const double> powers) {
  require_size(problem, powers);
  double total = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) total += fuel_cost_unit(problem.unit(i), powers[i]);
  return total;
}

double gas_emission(const DispatchProblem& problem, std::span<const double> powers, Gas gas) {
  require_size(problem, powers);
  if (problem.gases().count(gas) == 0)
    throw ValidationError("gases", "gas " + std::string(to_string(gas)) + " is not part of the problem");
  double total = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i)
    total += problem.unit(i).emissions.at(gas)(powers[i]);
  return total;
}

double transmission_loss(std::span<const double> powers, const LossMatrix& b) {
  if (powers.size() != b.size()) throw DimensionError("loss matrix dimension does not match powers");
  double total = 0.0;
  for (std::size_t m = 0; m < b.size(); ++m) {
    double row = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n) row += b(m, n) * powers[n];
    total += powers[m] * row;
  }
  return total;
}

double balance_residual(const DispatchProblem& problem, std::span<const double> powers) {
  require_size(problem, powers);
  const double generated = std::accumulate(powers.begin(), powers.end(), 0.0);
  const double loss = problem.losses() ? transmission_loss(powers, *problem.losses()) : 0.0;
  return generated - problem.demand() - loss;
}

std::vector<LimitViolation> check_limits(const DispatchProblem& problem,
                                         std::span<const double> powers) {
  require_size(problem, powers);
  std::vector<LimitViolation> out;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const auto& unit = problem.unit(i);
    if (powers[i] > unit.p_max) {
      out.push_back({unit.id, powers[i] - unit.p_max});
    } else if (powers[i] < unit.p_min) {
      out.push_back({unit.id, powers[i] - unit.p_min});
    }
  }
  return out;
}

double emission_cost(const DispatchProblem& problem, std::span<const double> powers,
                     const PenaltyFactors& h) {
  double total = 0.0;
  for (Gas gas : problem.gases()) total += h.at(gas) * gas_emission(problem, powers, gas);
  return total;
}

double combined_objective(const DispatchProblem& problem, std::span<const double> powers,
                          const PenaltyFactors& h) {
  double value = 0.0;
  if (problem.k1() == 1) value += total_fuel_cost(problem, powers);
  if (problem.k2() == 1) {
    h.check_compatible(problem);
    value += emission_cost(problem, powers, h);
  }
  return value;
}

DispatchSolution evaluate(const DispatchProblem& problem, std::span<const double> powers,
                          const PenaltyFactors& h) {
  require_size(problem, powers);
  DispatchSolution s;
  s.powers.assign(powers.begin(), powers.end());
  s.fuel_cost = total_fuel_cost(problem, powers);
  for (Gas gas : problem.gases()) s.emissions[gas] = gas_emission(problem, powers, gas);

  bool priced = true;
  if (problem.k2() == 1) {
    h.check_compatible(problem);
  } else {
    // Emission cost is informational when the emission objective is off.
    priced = same_demand(h.demand(), problem.demand()) &&
             std::all_of(problem.gases().begin(), problem.gases().end(),
                         [&](Gas g) { return h.contains(g); });
  }
  if (priced) {
    for (const auto& [gas, e] : s.emissions) s.emission_cost += h.at(gas) * e;
  }
  s.total_cost = problem.k1() * s.fuel_cost + problem.k2() * s.emission_cost;
  s.balance_residual = balance_residual(problem, powers);
  s.limit_violations = check_limits(problem, powers);
  return s;
}

}  // namespace ceed
