#include <cmath>
#include <numeric>

#include "builders.hpp"
#include "ceed/error.hpp"
#include "ceed/oracle.hpp"
#include "ceed/penalty.hpp"
#include "ceed/pso.hpp"
#include "doctest.h"

using namespace ceed;
using ceed::testing::make_unit;

namespace {

void check_feasible(const DispatchProblem& problem, const std::vector<double>& p) {
  CHECK(check_limits(problem, p).empty());
  CHECK(std::abs(balance_residual(problem, p)) <= kBalanceTolerance);
}

}  // namespace

TEST_SUITE("pso") {

TEST_CASE("constriction coefficient for phi = 4.1") {
  CHECK(pso::constriction_factor(4.1) == doctest::Approx(0.7298).epsilon(1e-4));
  CHECK_THROWS_AS(pso::constriction_factor(4.0), ValidationError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(pso::Config{}.validate());
  pso::Config c;
  c.phi = 4.2;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.c1 = c.c2 = 1.5;
  c.phi = 3.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.constriction = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("inertia decreases linearly from w_max to w_min") {
  pso::Config c;
  CHECK(pso::inertia_weight(c, 0) == doctest::Approx(0.9));
  CHECK(pso::inertia_weight(c, 250) == doctest::Approx(0.65));
  CHECK(pso::inertia_weight(c, 500) == doctest::Approx(0.4));
}

TEST_CASE("init_swarm") {
  SUBCASE("one unit: every particle sits at the demand") {
    DispatchProblem one({make_unit(1, 10, 300, {10, 2, 0.01})}, 180, {}, {}, 1, 0);
    const auto swarm = pso::init_swarm(one, pso::Config{}, PenaltyFactors());
    REQUIRE(swarm.particles.size() == 10);
    for (const auto& particle : swarm.particles) CHECK(particle.position[0] == doctest::Approx(180.0));
  }
  SUBCASE("six units at 1500 MW") {
    const auto problem = ceed::testing::six_unit_problem(1500);
    const auto h = penalty_factors_all(problem);
    const auto swarm = pso::init_swarm(problem, pso::Config{}, h);
    REQUIRE(swarm.particles.size() == 10);
    for (const auto& particle : swarm.particles) {
      CHECK(particle.position.size() == 6);
      check_feasible(problem, particle.position);
      CHECK(particle.velocity == std::vector<double>(6, 0.0));
      CHECK(particle.best_value == combined_objective(problem, particle.position, h));
    }
  }
  SUBCASE("fixed seed gives an identical swarm") {
    const auto problem = ceed::testing::six_unit_problem(1500);
    const auto h = penalty_factors_all(problem);
    pso::Config c;
    c.seed = 99;
    const auto a = pso::init_swarm(problem, c, h);
    const auto b = pso::init_swarm(problem, c, h);
    for (std::size_t k = 0; k < a.particles.size(); ++k)
      CHECK(a.particles[k].position == b.particles[k].position);
    CHECK(a.best_value == b.best_value);
  }
}

TEST_CASE("step: particle at pbest = gbest with zero velocity stays put") {
  const auto problem = ceed::testing::six_unit_problem(1500);
  const auto h = penalty_factors_all(problem);
  pso::Config c;
  c.particles = 1;
  auto swarm = pso::init_swarm(problem, c, h);
  const auto before = swarm.particles[0].position;
  pso::step(swarm, problem, c, h, 0);
  CHECK(swarm.particles[0].position == before);
  CHECK(swarm.particles[0].velocity == std::vector<double>(6, 0.0));
}

TEST_CASE("step: degenerate coefficients give pure drift until clamped") {
  const auto problem = ceed::testing::six_unit_problem(1500);
  const auto h = penalty_factors_all(problem);
  pso::Config c;
  c.particles = 1;
  c.w_max = c.w_min = 1.0;
  c.constriction = 1.0;
  c.c1 = c.c2 = 0.0;
  c.v_max_fraction = 1.0;
  auto swarm = pso::init_swarm(problem, c, h);
  auto& particle = swarm.particles[0];
  particle.position = {250, 250, 400, 100, 300, 200};
  const std::vector<double> v0{5, -5, 0, 0, 0, 0};  // keeps the balance
  particle.velocity = v0;
  for (int t = 1; t <= 10; ++t) {
    pso::step(swarm, problem, c, h, t - 1);
    CHECK(particle.position[0] == doctest::Approx(250 + 5.0 * t));
    CHECK(particle.position[1] == doctest::Approx(250 - 5.0 * t));
    CHECK(particle.position[2] == 400);
  }
  // Unit 1 tops out at 300 MW after 10 steps; the next step clamps it and
  // the repair hands the excess elsewhere.
  pso::step(swarm, problem, c, h, 10);
  CHECK(particle.position[0] == doctest::Approx(300.0));
  check_feasible(problem, particle.position);
}

TEST_CASE("step keeps iterates feasible and never worsens the global best") {
  const auto problem = ceed::testing::six_unit_problem(2000);
  const auto h = penalty_factors_all(problem);
  pso::Config c;
  c.seed = 5;
  auto swarm = pso::init_swarm(problem, c, h);
  for (int t = 0; t < 100; ++t) {
    const double before = swarm.best_value;
    pso::step(swarm, problem, c, h, t);
    CHECK(swarm.best_value <= before);
    for (const auto& particle : swarm.particles) {
      check_feasible(problem, particle.position);
      CHECK(particle.best_value == combined_objective(problem, particle.best_position, h));
    }
  }
}

TEST_CASE("run") {
  SUBCASE("one unit is forced to the demand") {
    DispatchProblem one({make_unit(1, 10, 300, {10, 2, 0.01})}, 180, {}, {}, 1, 0);
    pso::Config c;
    c.iterations = 20;
    const auto r = pso::run(one, c, PenaltyFactors());
    CHECK(r.solution.powers[0] == doctest::Approx(180.0));
    CHECK(r.solution.total_cost == doctest::Approx(10 + 2 * 180 + 0.01 * 180 * 180));
  }
  SUBCASE("two-unit cost-only problem matches lambda iteration within 0.01%") {
    const auto problem = ceed::testing::two_unit_quadratic(300);
    const auto exact = oracle::lambda_solve(problem, PenaltyFactors());
    const double best = combined_objective(problem, exact.powers, PenaltyFactors());
    const auto r = pso::run(problem, pso::Config{}, PenaltyFactors());
    CHECK(r.solution.total_cost <= best * (1 + 1e-4));
    CHECK(r.solution.total_cost >= best * (1 - 1e-9));
  }
  SUBCASE("trace is non-increasing, has one entry per iteration and is reproducible") {
    const auto problem = ceed::testing::six_unit_problem(1500);
    const auto h = penalty_factors_all(problem);
    pso::Config c;
    c.seed = 1234;
    const auto a = pso::run(problem, c, h);
    const auto b = pso::run(problem, c, h);
    REQUIRE(a.trace.size() == 500);
    for (std::size_t t = 1; t < a.trace.size(); ++t) CHECK(a.trace[t] <= a.trace[t - 1]);
    CHECK(a.trace == b.trace);
    CHECK(a.solution.powers == b.solution.powers);
    CHECK(a.solution.total_cost == a.trace.back());
    CHECK(a.solution.feasible());
  }
}

}
