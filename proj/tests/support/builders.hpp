#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ceed/model.hpp"

namespace ceed::testing {

inline GeneratorUnit make_unit(int id, double p_min, double p_max, Quadratic cost,
                               std::map<Gas, Quadratic> emissions = {}) {
  GeneratorUnit u;
  u.id = id;
  u.p_min = p_min;
  u.p_max = p_max;
  u.cost = cost;
  u.emissions = std::move(emissions);
  return u;
}

// Two units with costs 0.5 p^2 and 1.0 p^2.
inline DispatchProblem two_unit_quadratic(double demand, double p_max1 = 1000.0) {
  return DispatchProblem({make_unit(1, 0.0, p_max1, {0.0, 0.0, 0.5}),
                          make_unit(2, 0.0, 1000.0, {0.0, 0.0, 1.0})},
                         demand, std::nullopt, {}, 1, 0);
}

// Six units with plausible magnitudes, loosely shaped like a large thermal plant.
inline std::vector<GeneratorUnit> six_units() {
  auto em = [](Quadratic nox, Quadratic cox, Quadratic sox) {
    return std::map<Gas, Quadratic>{{Gas::NOx, nox}, {Gas::COx, cox}, {Gas::SOx, sox}};
  };
  return {
      make_unit(1, 50, 300, {150, 7.0, 0.0040}, em({20, 0.40, 0.0012}, {300, 25, 0.010}, {60, 5.0, 0.0015})),
      make_unit(2, 50, 400, {180, 7.4, 0.0030}, em({25, 0.45, 0.0010}, {320, 22, 0.009}, {70, 5.5, 0.0012})),
      make_unit(3, 100, 576, {250, 6.6, 0.0022}, em({30, 0.55, 0.0016}, {400, 24, 0.006}, {80, 6.0, 0.0009})),
      make_unit(4, 50, 200, {120, 8.2, 0.0050}, em({15, 0.35, 0.0018}, {250, 20, 0.012}, {50, 4.5, 0.0020})),
      make_unit(5, 100, 500, {260, 6.9, 0.0024}, em({35, 0.60, 0.0014}, {420, 26, 0.007}, {90, 6.2, 0.0010})),
      make_unit(6, 50, 300, {140, 7.8, 0.0035}, em({18, 0.42, 0.0011}, {280, 23, 0.011}, {55, 5.2, 0.0016})),
  };
}

inline DispatchProblem six_unit_problem(double demand, int k1 = 1, int k2 = 1) {
  return DispatchProblem(six_units(), demand, std::nullopt, {Gas::NOx, Gas::COx, Gas::SOx}, k1, k2);
}

// Random lossless instance with 2-3 units, positive quadratic cost and emission
// terms, and an interior demand.
inline DispatchProblem random_instance(std::mt19937_64& gen, std::size_t units) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(gen); };
  std::vector<GeneratorUnit> list;
  for (std::size_t i = 0; i < units; ++i) {
    const double p_min = in(0.0, 80.0);
    const double p_max = p_min + in(60.0, 400.0);
    list.push_back(make_unit(static_cast<int>(i) + 1, p_min, p_max,
                             {in(50, 400), in(5, 40), in(0.001, 0.05)},
                             {{Gas::NOx, {in(5, 50), in(0.1, 1.0), in(0.0005, 0.005)}},
                              {Gas::SOx, {in(10, 80), in(0.5, 3.0), in(0.0002, 0.003)}}}));
  }
  double lo = 0.0, hi = 0.0;
  for (const auto& u : list) {
    lo += u.p_min;
    hi += u.p_max;
  }
  const double demand = lo + in(0.05, 0.95) * (hi - lo);
  return DispatchProblem(std::move(list), demand, std::nullopt, {Gas::NOx, Gas::SOx}, 1, 1);
}

// Independent brute-force quadratic form over a raw (possibly asymmetric) matrix.
inline double raw_quadratic_form(const std::vector<double>& p,
                                 const std::vector<std::vector<double>>& b) {
  double s = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m)
    for (std::size_t n = 0; n < p.size(); ++n) s += p[m] * b[m][n] * p[n];
  return s;
}

}  // namespace ceed::testing
