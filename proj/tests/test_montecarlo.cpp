#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "asep/bounds.hpp"
#include "asep/construct.hpp"
#include "asep/montecarlo.hpp"
#include "asep/rng.hpp"
#include "asep/verify.hpp"

using namespace asep;
using namespace asep::mc;

namespace {

constexpr double kLn2 = 0.6931471805599453;

// columns 0 and 1 identical and nonzero
TestDesign duplicated_column_design() {
  std::vector<BitVec> rows{BitVec::from01("110"), BitVec::from01("001")};
  return TestDesign::from_rows(3, std::move(rows));
}

}  // namespace

TEST_CASE("wilson interval reference values") {
  const auto z = wilson_estimate(0, 100);
  CHECK(z.point == 0.0);
  CHECK(z.wilson_lo == 0.0);
  CHECK(z.wilson_hi == doctest::Approx(0.0369934982069857).epsilon(1e-12));

  const auto full = wilson_estimate(100, 100);
  CHECK(full.wilson_lo == doctest::Approx(0.963006501793014).epsilon(1e-12));
  CHECK(full.wilson_hi == 1.0);

  const auto half = wilson_estimate(50, 100);
  CHECK(half.wilson_lo == doctest::Approx(0.403831530365996).epsilon(1e-12));
  CHECK(half.wilson_hi == doctest::Approx(0.596168469634004).epsilon(1e-12));

  const auto small = wilson_estimate(3, 17);
  CHECK(small.wilson_lo == doctest::Approx(0.06191126637621).epsilon(1e-10));
  CHECK(small.wilson_hi == doctest::Approx(0.410294585688341).epsilon(1e-10));

  const auto big = wilson_estimate(6667, 10000);
  CHECK(big.wilson_lo == doctest::Approx(0.657398411935244).epsilon(1e-12));
  CHECK(big.wilson_hi == doctest::Approx(0.675873563007972).epsilon(1e-12));

  CHECK(big.wilson_lo <= big.point);
  CHECK(big.point <= big.wilson_hi);
  CHECK_THROWS_AS((void)wilson_estimate(0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)wilson_estimate(3, 2), std::invalid_argument);
}

TEST_CASE("overlap probability estimate vs slow pairwise oracle") {
  // re-derive each trial's design and compare against a from-scratch check
  const int n = 6, k = 2, m = 4;
  const std::uint64_t seed = 1;
  const double p = p_from_alpha(k, kLn2);
  const std::vector<int> fixed{0, 1};

  std::uint64_t oracle_successes = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const TestDesign d = bernoulli_design(n, m, p, derive_seed(seed, t));
    const SupportSet target = union_support(d, fixed);
    bool overlap = false;
    for (int a = 0; a < n && !overlap; ++a)
      for (int b = a + 1; b < n && !overlap; ++b) {
        if (a == 0 && b == 1) continue;
        if (union_support(d, std::vector<int>{a, b}) == target) overlap = true;
      }
    oracle_successes += overlap ? 1 : 0;
  }

  const auto est = estimate_overlap_prob(n, k, m, kLn2, 100, seed);
  CHECK(est.successes == oracle_successes);

  // 20000 trials stay below the (trivially clipped) union bound
  const auto big = estimate_overlap_prob(n, k, m, kLn2, 20000, seed);
  const double bound = bounds::overlap_union_bound(n, k, m, kLn2);
  CHECK(bound == doctest::Approx(2.375));
  CHECK(big.wilson_lo <= std::min(1.0, bound));
  CHECK(big.point > 0.3);  // collisions are common at m = 4
}

TEST_CASE("overlap probability at large m is negligible") {
  const auto est = estimate_overlap_prob(6, 2, 40, kLn2, 2000, 1);
  const double bound = bounds::overlap_union_bound(6, 2, 40, kLn2);
  CHECK(est.successes == 0);
  CHECK(est.point <= bound);
  CHECK(est.wilson_lo <= bound);
}

TEST_CASE("overlap probability degenerate cases") {
  // m = 0: all unions are empty, every other subset collides
  const auto degenerate = estimate_overlap_prob(6, 2, 0, kLn2, 50, 9);
  CHECK(degenerate.point == 1.0);

  CHECK_THROWS_AS((void)estimate_overlap_prob(6, 2, 4, kLn2, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)estimate_overlap_prob(2, 2, 4, kLn2, 10, 1), std::invalid_argument);
}

TEST_CASE("epsilon estimate") {
  const auto zero = estimate_epsilon(TestDesign::identity(20), 3, 500, 4);
  CHECK(zero.successes == 0);
  CHECK(zero.wilson_lo == 0.0);

  // exact value is 2/3
  const auto dup = estimate_epsilon(duplicated_column_design(), 1, 10000, 5);
  CHECK(dup.wilson_lo <= 2.0 / 3.0);
  CHECK(2.0 / 3.0 <= dup.wilson_hi);

  // interval contains the exact epsilon_sep of a random design
  const TestDesign d = bernoulli_design(12, 16, p_from_alpha(2, kLn2), 21);
  const double exact = separability_report(d, 2).epsilon_sep;
  const auto est = estimate_epsilon(d, 2, 10000, 6);
  CHECK(est.wilson_lo <= exact);
  CHECK(exact <= est.wilson_hi);
}

TEST_CASE("epsilon estimate coverage across seeds") {
  // the 95% interval should contain the exact value for (at least) 95% of
  // master seeds
  const TestDesign d = bernoulli_design(12, 16, p_from_alpha(2, kLn2), 21);
  const double exact = separability_report(d, 2).epsilon_sep;
  int covered = 0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    const auto est = estimate_epsilon(d, 2, 10000, 1000 + static_cast<std::uint64_t>(s));
    if (est.wilson_lo <= exact && exact <= est.wilson_hi) ++covered;
  }
  CHECK(covered >= 38);
}

TEST_CASE("markov existence fractions") {
  // every design qualifies at epsilon = 1
  CHECK(markov_existence_fraction_m(10, 2, kLn2, 6, 1.0, 30, 3) == 1.0);

  const double frac = markov_existence_fraction(14, 2, kLn2, 1.0, 0.05, 200, 11);
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
  // at least half of random designs should qualify; soft check only, the
  // guarantee is asymptotic and this n is tiny
  WARN(frac >= 0.5);

  // doubling m can only help (statistically; checked at these seeds)
  const double f1 = markov_existence_fraction_m(14, 2, kLn2, 19, 0.05, 100, 12);
  const double f2 = markov_existence_fraction_m(14, 2, kLn2, 38, 0.05, 100, 12);
  CHECK(f1 <= f2);

  CHECK_THROWS_AS((void)markov_existence_fraction_m(10, 2, kLn2, 6, -0.1, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)markov_existence_fraction_m(10, 2, kLn2, 6, 0.1, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("group-testing simulation") {
  const auto id = simulate_gt(TestDesign::identity(10), 2, 500, 8);
  CHECK(id.successes == 0);

  const auto dup = simulate_gt(duplicated_column_design(), 1, 10000, 9);
  CHECK(dup.wilson_lo <= 2.0 / 3.0);
  CHECK(2.0 / 3.0 <= dup.wilson_hi);

  const TestDesign d = bernoulli_design(10, 14, p_from_alpha(2, kLn2), 3);
  const double exact = exact_error_probability(d, 2).value();
  const auto est = simulate_gt(d, 2, 10000, 10);
  CHECK(est.wilson_lo <= exact);
  CHECK(exact <= est.wilson_hi);
}

TEST_CASE("estimates are deterministic across thread counts") {
  McOptions t1{.threads = 1, .guard = kDefaultEnumGuard};
  McOptions t4{.threads = 4, .guard = kDefaultEnumGuard};

  const auto a1 = estimate_overlap_prob(8, 2, 8, kLn2, 4000, 33, t1);
  const auto a4 = estimate_overlap_prob(8, 2, 8, kLn2, 4000, 33, t4);
  CHECK(a1.successes == a4.successes);
  CHECK(a1.wilson_lo == a4.wilson_lo);
  CHECK(a1.wilson_hi == a4.wilson_hi);

  const TestDesign d = bernoulli_design(12, 12, 0.25, 5);
  const auto b1 = estimate_epsilon(d, 2, 4000, 44, t1);
  const auto b4 = estimate_epsilon(d, 2, 4000, 44, t4);
  CHECK(b1.successes == b4.successes);

  const auto c1 = simulate_gt(d, 2, 2000, 55, t1);
  const auto c4 = simulate_gt(d, 2, 2000, 55, t4);
  CHECK(c1.successes == c4.successes);

  const double m1 = markov_existence_fraction_m(12, 2, kLn2, 12, 0.1, 60, 66, t1);
  const double m4 = markov_existence_fraction_m(12, 2, kLn2, 12, 0.1, 60, 66, t4);
  CHECK(m1 == m4);
}
