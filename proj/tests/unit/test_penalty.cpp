#include <algorithm>
#include <random>

#include "builders.hpp"
#include "ceed/error.hpp"
#include "ceed/penalty.hpp"
#include "doctest.h"

using namespace ceed;
using ceed::testing::make_unit;

TEST_SUITE("penalty") {

TEST_CASE("unit_ratios is cost over emission at p_max") {
  // cost 100 $/h and emission 50 kg/h at p_max = 10
  DispatchProblem p({make_unit(1, 0, 10, {100, 0, 0}, {{Gas::NOx, {50, 0, 0}}}),
                     make_unit(2, 0, 10, {3, 2, 0.5}, {{Gas::NOx, {3, 2, 0.5}}})},
                    5, {}, {Gas::NOx});
  const auto ratios = unit_ratios(p, Gas::NOx);
  REQUIRE(ratios.size() == 2);
  CHECK(ratios[0].unit_id == 1);
  CHECK(ratios[0].h == doctest::Approx(2.0));
  CHECK(ratios[0].p_max == 10.0);
  CHECK(ratios[1].h == doctest::Approx(1.0));
}

TEST_CASE("unit_ratios rejects a zero emission denominator and names the unit") {
  DispatchProblem p({make_unit(1, 0, 10, {100, 0, 0}, {{Gas::NOx, {50, 0, 0}}}),
                     make_unit(4, 0, 10, {100, 0, 0}, {{Gas::NOx, {0, 0, 0}}})},
                    5, {}, {Gas::NOx});
  try {
    unit_ratios(p, Gas::NOx);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "units[id=4]");
  }
}

TEST_CASE("penalty_factor ranks and accumulates capacity") {
  SUBCASE("single unit") {
    DispatchProblem p({make_unit(1, 0, 100, {100, 0, 0}, {{Gas::SOx, {40, 0, 0}}})}, 60, {}, {Gas::SOx});
    CHECK(penalty_factor(p, Gas::SOx) == doctest::Approx(2.5));
  }
  SUBCASE("ratios (1, 100 MW), (2, 100 MW), demand 150 -> 2") {
    CHECK(select_penalty_factor({{1, 2.0, 100}, {2, 1.0, 100}}, 150) == 2.0);
    CHECK(select_penalty_factor({{1, 2.0, 100}, {2, 1.0, 100}}, 100) == 1.0);  // inclusive
    CHECK(select_penalty_factor({{1, 2.0, 100}, {2, 1.0, 100}}, 100.0001) == 2.0);
  }
  SUBCASE("ties are broken by unit id") {
    CHECK(select_penalty_factor({{3, 1.0, 50}, {1, 1.0, 100}, {2, 5.0, 100}}, 120) == 1.0);
  }
  SUBCASE("capacity below demand") {
    CHECK_THROWS_AS(select_penalty_factor({{1, 1.0, 10}}, 20), InfeasibleError);
  }
}

TEST_CASE("penalty_factors_all covers the gas set and records demand") {
  DispatchProblem single({make_unit(1, 0, 100, {100, 0, 0}, {{Gas::NOx, {40, 0, 0}}})}, 60, {}, {Gas::NOx});
  const auto h = penalty_factors_all(single);
  CHECK(h.factors().size() == 1);
  CHECK(h.at(Gas::NOx) == doctest::Approx(2.5));
  CHECK(h.demand() == 60.0);

  const auto six = penalty_factors_all(ceed::testing::six_unit_problem(1500));
  CHECK(six.factors().size() == 3);
}

TEST_CASE("penalty factor properties on random systems") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto base = ceed::testing::random_instance(gen, 2 + trial % 2);
    for (Gas gas : base.gases()) {
      const auto ratios = unit_ratios(base, gas);
      const double h = penalty_factor(base, gas);
      // selection, not interpolation
      CHECK(std::any_of(ratios.begin(), ratios.end(), [h](const UnitRatio& r) { return r.h == h; }));

      // permutation invariance
      auto units = base.units();
      std::shuffle(units.begin(), units.end(), gen);
      DispatchProblem permuted(units, base.demand(), {}, base.gases());
      CHECK(penalty_factor(permuted, gas) == h);

      // monotone in demand
      const double higher = base.demand() + u(gen) * (base.total_p_max() - base.demand());
      CHECK(penalty_factor(base.with_demand(higher), gas) >= h);
    }
  }
}

}
