#include "ceed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ceed/error.hpp"

namespace ceed::oracle {

namespace {

constexpr int kMaxBisections = 200;

std::vector<double> dispatch_at(const std::vector<Quadratic>& curves, const DispatchProblem& problem,
                                double lambda) {
  std::vector<double> p(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& unit = problem.unit(i);
    p[i] = std::clamp((lambda - curves[i].linear) / (2.0 * curves[i].quadratic), unit.p_min,
                      unit.p_max);
  }
  return p;
}

std::vector<double> grid_points(double lo, double hi, double step) {
  std::vector<double> pts;
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  pts.reserve(static_cast<std::size_t>(count) + 2);
  for (long k = 0; k <= count; ++k) pts.push_back(lo + static_cast<double>(k) * step);
  if (hi - pts.back() > 1e-9 * std::max(1.0, hi)) pts.push_back(hi);
  return pts;
}

}  // namespace

std::vector<Quadratic> scalarized_curves(const DispatchProblem& problem, const PenaltyFactors& h,
                                         int k1, int k2) {
  if (k2 == 1) h.check_compatible(problem);
  std::vector<Quadratic> curves;
  curves.reserve(problem.size());
  for (const auto& unit : problem.units()) {
    Quadratic q;
    q.constant = k1 * unit.cost.constant;
    q.linear = k1 * unit.cost.linear;
    q.quadratic = k1 * unit.cost.quadratic;
    if (k2 == 1) {
      for (Gas gas : problem.gases()) {
        const double hg = h.at(gas);
        const auto& e = unit.emissions.at(gas);
        q.constant += hg * e.constant;
        q.linear += hg * e.linear;
        q.quadratic += hg * e.quadratic;
      }
    }
    curves.push_back(q);
  }
  return curves;
}

LambdaResult lambda_solve(const DispatchProblem& problem, const PenaltyFactors& h, int k1, int k2,
                          double tol) {
  if (!problem.lossless()) throw UnsupportedError("lambda iteration requires a lossless problem");
  const double demand = problem.demand();
  if (demand < problem.total_p_min() || demand > problem.total_p_max())
    throw InfeasibleError("demand outside the combined unit limits");
  const auto curves = scalarized_curves(problem, h, k1, k2);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!(curves[i].quadratic > 0.0)) {
      std::ostringstream os;
      os << "unit " << problem.unit(i).id << " has a non-positive scalarized quadratic coefficient";
      throw UnsupportedError(os.str());
    }
    const auto& unit = problem.unit(i);
    lo = std::min(lo, curves[i].derivative(unit.p_min));
    hi = std::max(hi, curves[i].derivative(unit.p_max));
  }

  LambdaResult result;
  double lambda = 0.5 * (lo + hi);
  std::vector<double> p = dispatch_at(curves, problem, lambda);
  for (int it = 1; it <= kMaxBisections; ++it) {
    lambda = 0.5 * (lo + hi);
    p = dispatch_at(curves, problem, lambda);
    result.iterations = it;
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(total - demand) <= tol) break;
    (total < demand ? lo : hi) = lambda;
  }

  // Final Newton step on lambda over the units strictly inside their limits.
  // Exact for quadratic curves as long as the active set stays the same.
  double slope = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& unit = problem.unit(i);
    if (p[i] > unit.p_min && p[i] < unit.p_max) slope += 1.0 / (2.0 * curves[i].quadratic);
  }
  if (slope > 0.0) {
    const double gap = demand - std::accumulate(p.begin(), p.end(), 0.0);
    const double refined = lambda + gap / slope;
    auto q = dispatch_at(curves, problem, refined);
    if (std::abs(std::accumulate(q.begin(), q.end(), 0.0) - demand) < std::abs(gap)) {
      lambda = refined;
      p = std::move(q);
    }
  }
  result.lambda = lambda;
  result.residual = std::accumulate(p.begin(), p.end(), 0.0) - demand;
  result.powers = std::move(p);
  return result;
}

LambdaResult lambda_solve(const DispatchProblem& problem, const PenaltyFactors& h, double tol) {
  return lambda_solve(problem, h, problem.k1(), problem.k2(), tol);
}

DispatchSolution grid_search(const DispatchProblem& problem, const PenaltyFactors& h,
                             double resolution) {
  const std::size_t n = problem.size();
  if (n > 3) throw UnsupportedError("grid search is limited to three units");
  if (!problem.lossless()) throw UnsupportedError("grid search requires a lossless problem");
  if (!(resolution > 0.0)) throw ValidationError("resolution", "must be > 0");

  const auto& last = problem.unit(n - 1);
  std::vector<std::vector<double>> axes;
  for (std::size_t i = 0; i + 1 < n; ++i)
    axes.push_back(grid_points(problem.unit(i).p_min, problem.unit(i).p_max, resolution));

  std::vector<double> candidate(n);
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> index(axes.size(), 0);
  while (true) {
    double partial = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      candidate[i] = axes[i][index[i]];
      partial += candidate[i];
    }
    const double rest = problem.demand() - partial;
    const double slack = 1e-9 * std::max(1.0, problem.demand());
    if (rest >= last.p_min - slack && rest <= last.p_max + slack) {
      candidate[n - 1] = std::clamp(rest, last.p_min, last.p_max);
      const double value = combined_objective(problem, candidate, h);
      if (value < best_value) {
        best_value = value;
        best = candidate;
      }
    }
    // Odometer increment over the grid axes.
    std::size_t d = 0;
    for (; d < axes.size(); ++d) {
      if (++index[d] < axes[d].size()) break;
      index[d] = 0;
    }
    if (d == axes.size()) break;
  }
  if (best.empty()) throw InfeasibleError("no grid point satisfies the power balance and limits");
  return evaluate(problem, best, h);
}

}  // namespace ceed::oracle
