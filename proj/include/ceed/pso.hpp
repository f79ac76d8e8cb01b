#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ceed/model.hpp"
#include "ceed/rng.hpp"

namespace ceed {

// Best objective value ($/h) after each iteration or generation.
using ConvergenceTrace = std::vector<double>;

// Called with every candidate power vector a solver evaluates, after repair.
using EvaluationHook = std::function<void(std::span<const double>)>;

namespace pso {

struct Config {
  int particles = 10;
  int iterations = 500;
  double w_max = 0.9;  // inertia, decreasing linearly to w_min
  double w_min = 0.4;
  double c1 = 2.05;
  double c2 = 2.05;
  double phi = 4.1;
  double constriction = 0.7298;
  double v_max_fraction = 0.5;  // velocity clamp as a fraction of each unit's range
  std::uint64_t seed = 1;

  // Throws ValidationError when phi != c1 + c2, phi <= 4, or the constriction
  // factor is outside (0, 1).
  void validate() const;
};

// Clerc's constriction coefficient 2 / |2 - phi - sqrt(phi^2 - 4 phi)|, phi > 4.
double constriction_factor(double phi);

struct Particle {
  std::vector<double> position;  // MW
  std::vector<double> velocity;  // MW per iteration
  std::vector<double> best_position;
  double best_value = 0.0;
};

struct Swarm {
  std::vector<Particle> particles;
  std::vector<double> best_position;
  double best_value = 0.0;
  Rng rng{0};
};

// Uniform positions inside the limits, repaired to balance, zero velocity.
Swarm init_swarm(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h);

double inertia_weight(const Config& config, int iteration);

// One velocity/position update of every particle followed by clamping, repair
// and best tracking:
//   v <- CF * (w(t) v + c1 r1 (pbest - x) + c2 r2 (gbest - x)),  |v| <= v_max
//   x <- repair(clamp(x + v))
// The config is not validated here so degenerate coefficients can be used.
void step(Swarm& swarm, const DispatchProblem& problem, const Config& config,
          const PenaltyFactors& h, int iteration);

struct Result {
  DispatchSolution solution;
  ConvergenceTrace trace;
};

Result run(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h,
           const EvaluationHook& hook = {});

}  // namespace pso
}  // namespace ceed
