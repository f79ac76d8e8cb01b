#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ceed/model.hpp"
#include "ceed/pso.hpp"
#include "ceed/rng.hpp"

namespace ceed::ga {

struct Config {
  int individuals = 10;
  int generations = 500;
  double p_crossover = 0.96;
  double p_mutation = 0.033;
  int bits_per_gene = 16;
  int elitism = 1;
  // false: every bit flips independently with p_mutation.
  // true: with probability p_mutation one random bit of the child flips.
  bool single_site_mutation = false;
  std::uint64_t seed = 1;

  void validate() const;
};

using Bits = std::vector<std::uint8_t>;

struct Chromosome {
  Bits bits;
  double fitness = 0.0;    // [0, 1], 1 for the best of its generation
  double objective = 0.0;  // $/h of the decoded and repaired powers
};

// Unsigned big-endian value of `gene` mapped linearly onto [lo, hi]:
// all zeros -> lo, all ones -> hi.
double decode_gene(std::span<const std::uint8_t> gene, double lo, double hi);

// Raw decoded powers, one gene per unit. Always inside the limits.
std::vector<double> decode(const Bits& bits, const DispatchProblem& problem, const Config& config);

// decode() followed by balance repair; this is what the objective is evaluated on.
std::vector<double> decode_repaired(const Bits& bits, const DispatchProblem& problem,
                                    const Config& config);

// (worst - obj) / (worst - best) within a generation; all ones when every
// objective is equal.
std::vector<double> fitness_from_objectives(std::span<const double> objectives);

// Fitness-proportionate pick; uniform when every fitness is zero.
std::size_t roulette_select(std::span<const double> fitness, Rng& rng);

std::pair<Bits, Bits> crossover_at(const Bits& a, const Bits& b, std::size_t site);

// With probability p_crossover, one site uniform in [1, L-1] and the suffixes swap.
std::pair<Bits, Bits> crossover(const Bits& a, const Bits& b, Rng& rng, const Config& config);

void mutate(Bits& child, Rng& rng, const Config& config);

struct Result {
  DispatchSolution solution;
  ConvergenceTrace trace;  // best objective of each generation
};

Result run(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h,
           const EvaluationHook& hook = {});

}  // namespace ceed::ga
