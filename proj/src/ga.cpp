#include "ceed/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ceed/error.hpp"
#include "ceed/repair.hpp"

namespace ceed::ga {

void Config::validate() const {
  if (individuals < 2) throw ValidationError("ga.individuals", "must be >= 2");
  if (generations < 1) throw ValidationError("ga.generations", "must be >= 1");
  if (!(p_crossover >= 0.0 && p_crossover <= 1.0))
    throw ValidationError("ga.p_crossover", "must lie in [0, 1]");
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0))
    throw ValidationError("ga.p_mutation", "must lie in [0, 1]");
  if (bits_per_gene < 4 || bits_per_gene > 32)
    throw ValidationError("ga.bits_per_gene", "must lie in [4, 32]");
  if (elitism < 0 || elitism >= individuals)
    throw ValidationError("ga.elitism", "must be in [0, individuals)");
}

double decode_gene(std::span<const std::uint8_t> gene, double lo, double hi) {
  if (gene.empty() || gene.size() > 52) throw DimensionError("gene width must be in [1, 52]");
  std::uint64_t value = 0;
  for (std::uint8_t bit : gene) value = (value << 1) | (bit ? 1u : 0u);
  const double top = std::ldexp(1.0, static_cast<int>(gene.size())) - 1.0;
  return lo + static_cast<double>(value) * (hi - lo) / top;
}

std::vector<double> decode(const Bits& bits, const DispatchProblem& problem, const Config& config) {
  const auto width = static_cast<std::size_t>(config.bits_per_gene);
  if (bits.size() != problem.size() * width)
    throw DimensionError("chromosome length must be units * bits_per_gene");
  std::vector<double> powers(problem.size());
  const std::span<const std::uint8_t> all(bits);
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const auto& unit = problem.unit(i);
    powers[i] = decode_gene(all.subspan(i * width, width), unit.p_min, unit.p_max);
  }
  return powers;
}

std::vector<double> decode_repaired(const Bits& bits, const DispatchProblem& problem,
                                    const Config& config) {
  auto powers = decode(bits, problem, config);
  repair_balance(problem, powers);
  return powers;
}

std::vector<double> fitness_from_objectives(std::span<const double> objectives) {
  std::vector<double> fitness(objectives.size(), 1.0);
  if (objectives.empty()) return fitness;
  const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
  const double best = *lo;
  const double worst = *hi;
  if (worst > best) {
    for (std::size_t j = 0; j < objectives.size(); ++j)
      fitness[j] = (worst - objectives[j]) / (worst - best);
  }
  return fitness;
}

std::size_t roulette_select(std::span<const double> fitness, Rng& rng) {
  if (fitness.empty()) throw DimensionError("cannot select from an empty population");
  const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
  if (!(total > 0.0)) return static_cast<std::size_t>(rng.below(fitness.size()));
  const double spin = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t j = 0; j < fitness.size(); ++j) {
    acc += fitness[j];
    if (spin < acc) return j;
  }
  // Rounding can leave spin == total; land on the last slice with positive width.
  for (std::size_t j = fitness.size(); j-- > 0;) {
    if (fitness[j] > 0.0) return j;
  }
  return fitness.size() - 1;
}

std::pair<Bits, Bits> crossover_at(const Bits& a, const Bits& b, std::size_t site) {
  if (a.size() != b.size()) throw DimensionError("parents differ in length");
  if (site > a.size()) throw DimensionError("crossover site past the end");
  Bits child_a(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(site));
  Bits child_b(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(site));
  child_a.insert(child_a.end(), b.begin() + static_cast<std::ptrdiff_t>(site), b.end());
  child_b.insert(child_b.end(), a.begin() + static_cast<std::ptrdiff_t>(site), a.end());
  return {std::move(child_a), std::move(child_b)};
}

std::pair<Bits, Bits> crossover(const Bits& a, const Bits& b, Rng& rng, const Config& config) {
  if (a.size() != b.size()) throw DimensionError("parents differ in length");
  if (a.size() < 2 || !rng.bernoulli(config.p_crossover)) return {a, b};
  const std::size_t site = 1 + static_cast<std::size_t>(rng.below(a.size() - 1));
  return crossover_at(a, b, site);
}

void mutate(Bits& child, Rng& rng, const Config& config) {
  if (child.empty()) return;
  if (config.single_site_mutation) {
    if (rng.bernoulli(config.p_mutation)) {
      auto& bit = child[static_cast<std::size_t>(rng.below(child.size()))];
      bit = bit ? 0 : 1;
    }
    return;
  }
  for (auto& bit : child) {
    if (rng.bernoulli(config.p_mutation)) bit = bit ? 0 : 1;
  }
}

Result run(const DispatchProblem& problem, const Config& config, const PenaltyFactors& h,
           const EvaluationHook& hook) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t count = static_cast<std::size_t>(config.individuals);
  const std::size_t length = problem.size() * static_cast<std::size_t>(config.bits_per_gene);

  std::vector<Chromosome> population(count);
  for (auto& c : population) {
    c.bits.resize(length);
    for (auto& bit : c.bits) bit = static_cast<std::uint8_t>(rng.below(2));
  }

  Result result;
  result.trace.reserve(static_cast<std::size_t>(config.generations));
  std::vector<double> best_powers;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> objectives(count);

  for (int generation = 0; generation < config.generations; ++generation) {
    for (std::size_t j = 0; j < count; ++j) {
      auto powers = decode_repaired(population[j].bits, problem, config);
      if (hook) hook(powers);
      objectives[j] = combined_objective(problem, powers, h);
      population[j].objective = objectives[j];
      if (objectives[j] < best_value) {
        best_value = objectives[j];
        best_powers = std::move(powers);
      }
    }
    const auto fitness = fitness_from_objectives(objectives);
    for (std::size_t j = 0; j < count; ++j) population[j].fitness = fitness[j];
    result.trace.push_back(*std::min_element(objectives.begin(), objectives.end()));
    if (generation + 1 == config.generations) break;

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return objectives[a] < objectives[b]; });

    std::vector<Chromosome> next;
    next.reserve(count);
    for (int e = 0; e < config.elitism; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);

    std::vector<std::size_t> pool(count);
    for (auto& slot : pool) slot = roulette_select(fitness, rng);
    for (std::size_t k = pool.size(); k > 1; --k)
      std::swap(pool[k - 1], pool[static_cast<std::size_t>(rng.below(k))]);

    for (std::size_t k = 0; next.size() < count; k += 2) {
      const auto& pa = population[pool[k % count]].bits;
      const auto& pb = population[pool[(k + 1) % count]].bits;
      auto [ca, cb] = crossover(pa, pb, rng, config);
      mutate(ca, rng, config);
      mutate(cb, rng, config);
      next.push_back({std::move(ca), 0.0, 0.0});
      if (next.size() < count) next.push_back({std::move(cb), 0.0, 0.0});
    }
    population = std::move(next);
  }

  result.solution = evaluate(problem, best_powers, h);
  return result;
}

}  // namespace ceed::ga
