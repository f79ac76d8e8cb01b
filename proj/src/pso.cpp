#include "ceed/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ceed/error.hpp"
#include "ceed/repair.hpp"

namespace ceed::pso {

void Config::validate() const {
  if (particles < 1) throw ValidationError("pso.particles", "must be >= 1");
  if (iterations < 1) throw ValidationError("pso.iterations", "must be >= 1");
  if (std::abs(phi - (c1 + c2)) > 1e-12) throw ValidationError("pso.phi", "must equal c1 + c2");
  if (!(phi > 4.0)) throw ValidationError("pso.phi", "must be > 4");
  if (!(constriction > 0.0 && constriction < 1.0))
    throw ValidationError("pso.constriction", "must lie in (0, 1)");
  if (!(v_max_fraction > 0.0 && v_max_fraction <= 1.0))
    throw ValidationError("pso.v_max_fraction", "must lie in (0, 1]");
  if (w_min > w_max) throw ValidationError("pso.w_min", "must not exceed w_max");
}

double constriction_factor(double phi) {
  if (!(phi > 4.0)) throw ValidationError("phi", "must be > 4");
  return 2.0 / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
}

double inertia_weight(const Config& config, int iteration) {
  return config.w_max - (config.w_max - config.w_min) * iteration / config.iterations;
}

Swarm init_swarm(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h) {
  const std::size_t n = problem.size();
  Swarm swarm;
  swarm.rng = Rng(config.seed);
  swarm.particles.resize(static_cast<std::size_t>(std::max(config.particles, 0)));
  swarm.best_value = std::numeric_limits<double>::infinity();
  for (auto& particle : swarm.particles) {
    particle.position.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
      const auto& unit = problem.unit(d);
      particle.position[d] = swarm.rng.uniform(unit.p_min, unit.p_max);
    }
    repair_balance(problem, particle.position);
    particle.velocity.assign(n, 0.0);
    particle.best_position = particle.position;
    particle.best_value = combined_objective(problem, particle.position, h);
    if (particle.best_value < swarm.best_value) {
      swarm.best_value = particle.best_value;
      swarm.best_position = particle.position;
    }
  }
  return swarm;
}

void step(Swarm& swarm, const DispatchProblem& problem, const Config& config,
          const PenaltyFactors& h, int iteration) {
  const std::size_t n = problem.size();
  const double w = inertia_weight(config, iteration);
  // Global best is refreshed after the full sweep (synchronous update).
  const std::vector<double> global_best = swarm.best_position;
  for (auto& particle : swarm.particles) {
    for (std::size_t d = 0; d < n; ++d) {
      const auto& unit = problem.unit(d);
      const double r1 = swarm.rng.uniform();
      const double r2 = swarm.rng.uniform();
      const double x = particle.position[d];
      double v = config.constriction *
                 (w * particle.velocity[d] + config.c1 * r1 * (particle.best_position[d] - x) +
                  config.c2 * r2 * (global_best[d] - x));
      const double v_max = config.v_max_fraction * (unit.p_max - unit.p_min);
      v = std::clamp(v, -v_max, v_max);
      particle.velocity[d] = v;
      particle.position[d] = x + v;
    }
    repair_balance(problem, particle.position);
    const double value = combined_objective(problem, particle.position, h);
    if (value < particle.best_value) {
      particle.best_value = value;
      particle.best_position = particle.position;
    }
  }
  for (const auto& particle : swarm.particles) {
    if (particle.best_value < swarm.best_value) {
      swarm.best_value = particle.best_value;
      swarm.best_position = particle.best_position;
    }
  }
}

Result run(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h,
           const EvaluationHook& hook) {
  config.validate();
  Swarm swarm = init_swarm(problem, config, h);
  auto report = [&] {
    if (!hook) return;
    for (const auto& particle : swarm.particles) hook(particle.position);
  };
  report();
  Result result;
  result.trace.reserve(static_cast<std::size_t>(config.iterations));
  for (int t = 0; t < config.iterations; ++t) {
    step(swarm, problem, config, h, t);
    report();
    result.trace.push_back(swarm.best_value);
  }
  result.solution = evaluate(problem, swarm.best_position, h);
  return result;
}

}  // namespace ceed::pso
