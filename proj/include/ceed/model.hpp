#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ceed {

// Power balance tolerance (MW) used to classify a dispatch as feasible.
inline constexpr double kBalanceTolerance = 1e-6;

// Relative asymmetry accepted (and averaged away) in a loss matrix.
inline constexpr double kSymmetryTolerance = 1e-9;

enum class Gas { NOx, COx, SOx };

inline constexpr std::array<Gas, 3> kAllGases{Gas::NOx, Gas::COx, Gas::SOx};

std::string_view to_string(Gas gas);

// Accepts "nox", "NOx", "NOX" etc.
std::optional<Gas> parse_gas(std::string_view name);

// c0 + c1*p + c2*p^2. Used for both fuel cost ($/h) and emission (kg/h) curves.
struct Quadratic {
  double constant = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;

  double operator()(double p) const { return constant + linear * p + quadratic * p * p; }
  double derivative(double p) const { return linear + 2.0 * quadratic * p; }
};

struct GeneratorUnit {
  int id = 0;  // 1-based
  double p_min = 0.0;
  double p_max = 0.0;
  Quadratic cost;                      // a, b, c
  std::map<Gas, Quadratic> emissions;  // alpha, beta, gamma per gas
};

// Symmetric B-coefficient matrix, 1/MW, so that p'Bp is in MW.
class LossMatrix {
public:
  // Rejects non-square input and asymmetry above kSymmetryTolerance (relative to
  // the largest entry). Smaller asymmetry is averaged out; see was_symmetrized().
  explicit LossMatrix(const std::vector<std::vector<double>>& rows);

  // Always averages B and B'. The quadratic form is unchanged by this.
  static LossMatrix symmetrized(const std::vector<std::vector<double>>& rows);

  static LossMatrix zero(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }
  bool was_symmetrized() const noexcept { return symmetrized_; }
  std::vector<std::vector<double>> rows() const;

private:
  LossMatrix() = default;

  std::size_t n_ = 0;
  std::vector<double> data_;
  bool symmetrized_ = false;
};

// Immutable, validated dispatch instance.
class DispatchProblem {
public:
  DispatchProblem(std::vector<GeneratorUnit> units, double demand,
                  std::optional<LossMatrix> losses = std::nullopt, std::set<Gas> gases = {},
                  int k1 = 1, int k2 = 1);

  const std::vector<GeneratorUnit>& units() const noexcept { return units_; }
  const GeneratorUnit& unit(std::size_t index) const { return units_.at(index); }
  std::size_t size() const noexcept { return units_.size(); }
  double demand() const noexcept { return demand_; }
  const std::optional<LossMatrix>& losses() const noexcept { return losses_; }
  bool lossless() const noexcept { return !losses_.has_value(); }
  const std::set<Gas>& gases() const noexcept { return gases_; }
  int k1() const noexcept { return k1_; }
  int k2() const noexcept { return k2_; }

  double total_p_min() const noexcept;
  double total_p_max() const noexcept;

  DispatchProblem with_demand(double demand) const;
  DispatchProblem with_weights(int k1, int k2) const;

private:
  std::vector<GeneratorUnit> units_;
  double demand_;
  std::optional<LossMatrix> losses_;
  std::set<Gas> gases_;
  int k1_;
  int k2_;
};

// Per-gas price penalty factors ($/kg), valid only at the demand they were computed for.
class PenaltyFactors {
public:
  PenaltyFactors() = default;
  PenaltyFactors(double demand, std::map<Gas, double> factors);

  double demand() const noexcept { return demand_; }
  const std::map<Gas, double>& factors() const noexcept { return factors_; }
  bool contains(Gas gas) const { return factors_.count(gas) != 0; }
  double at(Gas gas) const;

  // Throws ValidationError unless every gas of the problem has a factor and the
  // demand matches.
  void check_compatible(const DispatchProblem& problem) const;

private:
  double demand_ = 0.0;
  std::map<Gas, double> factors_;
};

struct LimitViolation {
  int unit_id = 0;
  double amount = 0.0;  // > 0 above p_max, < 0 below p_min

  bool operator==(const LimitViolation&) const = default;
};

struct DispatchSolution {
  std::vector<double> powers;
  double fuel_cost = 0.0;
  std::map<Gas, double> emissions;
  double emission_cost = 0.0;
  double total_cost = 0.0;
  double balance_residual = 0.0;
  std::vector<LimitViolation> limit_violations;

  bool feasible(double balance_tolerance = kBalanceTolerance) const;
};

double fuel_cost_unit(const GeneratorUnit& unit, double p);

double total_fuel_cost(const DispatchProblem& problem, std::span<const double> powers);

// Throws ValidationError if the gas is not part of the problem's gas set.
double gas_emission(const DispatchProblem& problem, std::span<const double> powers, Gas gas);

double transmission_loss(std::span<const double> powers, const LossMatrix& b);

// sum(p) - demand - losses(p). Zero at exact balance.
double balance_residual(const DispatchProblem& problem, std::span<const double> powers);

// Signed distance to the violated bound for every unit outside its limits.
std::vector<LimitViolation> check_limits(const DispatchProblem& problem,
                                         std::span<const double> powers);

// sum over the problem's gases of h_g * E_g(p), in $/h.
double emission_cost(const DispatchProblem& problem, std::span<const double> powers,
                     const PenaltyFactors& h);

// k1 * F_T + k2 * sum_g h_g * E_g. No clamping or repair happens here; the
// penalty factors are only consulted (and validated) when k2 == 1.
double combined_objective(const DispatchProblem& problem, std::span<const double> powers,
                          const PenaltyFactors& h);

// Full breakdown of a power vector. total_cost == k1*fuel_cost + k2*emission_cost.
DispatchSolution evaluate(const DispatchProblem& problem, std::span<const double> powers,
                          const PenaltyFactors& h);

}  // namespace ceed
