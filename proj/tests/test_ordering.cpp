#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tokenlab/errors.hpp"
#include "tokenlab/ordering.hpp"
#include "tokenlab/rng.hpp"

using namespace tokenlab;

namespace {

// Random causal instance: launches uniform on [0, span], arrivals via the
// given transport law.
struct Instance {
  std::vector<double> schedule;
  std::vector<double> arrivals;
};

Instance random_instance(std::size_t m, const FirstPassageDist& dist,
                         RngStream& rng, double span = 3.0) {
  Instance inst;
  inst.schedule.resize(m);
  inst.arrivals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    inst.schedule[i] = rng.uniform(0.0, span);
    inst.arrivals[i] = inst.schedule[i] + dist.sample(rng);
  }
  return inst;
}

}  // namespace

TEST_CASE("admissible count: worked instances") {
  {
    std::vector<double> t{0.0, 1.0}, s{0.5, 1.5};
    AdmissibleCount c = count_admissible(t, s);
    REQUIRE(c.exact.has_value());
    CHECK(*c.exact == 1);
    CHECK(c.log_count == doctest::Approx(0.0));
  }
  {
    std::vector<double> t{0.0, 1.0}, s{1.2, 1.5};
    AdmissibleCount c = count_admissible(t, s);
    CHECK(*c.exact == 2);
    CHECK(c.log_count == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  {
    std::vector<double> t{0.0, 0.0, 0.0}, s{0.3, 0.8, 2.2};
    CHECK(*count_admissible(t, s).exact == 6);
  }
  {
    std::vector<double> t{0.5}, s{0.9};
    CHECK(*count_admissible(t, s).exact == 1);
  }
}

TEST_CASE("brute force count: worked instances") {
  std::vector<double> t{0.0, 1.0}, s{1.2, 1.5};
  CHECK(*brute_force_admissible(t, s).exact == 2);
  std::vector<double> t1{0.4}, s1{2.0};
  CHECK(*brute_force_admissible(t1, s1).exact == 1);
  std::vector<double> big(9, 0.0);
  CHECK_THROWS_AS(brute_force_admissible(big, big), SizeError);
}

TEST_CASE("product formula equals brute force on random instances") {
  RngStream rng(314);
  FirstPassageDist exp1 = FirstPassageDist::exponential(1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 6);  // 2..7
    Instance inst = random_instance(m, exp1, rng);
    AdmissibleCount fast = count_admissible(inst.schedule, inst.arrivals);
    AdmissibleCount slow = brute_force_admissible(inst.schedule, inst.arrivals);
    REQUIRE(fast.exact.has_value());
    CHECK(*fast.exact == *slow.exact);
  }
}

TEST_CASE("count is invariant under permutations of either argument") {
  RngStream rng(2718);
  FirstPassageDist exp1 = FirstPassageDist::exponential(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 5);
    Instance inst = random_instance(m, exp1, rng);
    std::uint64_t base = *count_admissible(inst.schedule, inst.arrivals).exact;
    for (int shuffle = 0; shuffle < 4; ++shuffle) {
      auto t = inst.schedule;
      auto s = inst.arrivals;
      for (std::size_t i = m; i > 1; --i) {
        std::swap(t[i - 1], t[rng.next_u64() % i]);
        std::swap(s[i - 1], s[rng.next_u64() % i]);
      }
      CHECK(*count_admissible(t, s).exact == base);
    }
  }
}

TEST_CASE("inconsistent data is rejected") {
  std::vector<double> t{5.0}, s{1.0};
  CHECK_THROWS_AS(count_admissible(t, s), InconsistencyError);
  std::vector<double> t2{0.0, 1.0}, s2{0.2, 0.4};
  CHECK_THROWS_AS(count_admissible(t2, s2), InconsistencyError);
  CHECK_THROWS_AS(brute_force_admissible(t2, s2), InconsistencyError);
  FirstPassageDist e = FirstPassageDist::exponential(1.0);
  CHECK_THROWS_AS(exact_conditional_entropy(t2, s2, e), InconsistencyError);
}

TEST_CASE("exact conditional entropy: worked instances") {
  std::vector<double> t{0.0, 1.0}, s{1.2, 1.5};
  FirstPassageDist e = FirstPassageDist::exponential(1.0);
  CHECK(exact_conditional_entropy(t, s, e) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // gamma(2,1): weights 0.6 e^-1.7 and 0.3 e^-1.7 -> (2/3, 1/3)
  FirstPassageDist g = FirstPassageDist::gamma(2.0, 1.0);
  double expected = std::log(3.0) - (2.0 / 3.0) * std::log(2.0);
  CHECK(exact_conditional_entropy(t, s, g) ==
        doctest::Approx(expected).epsilon(1e-12));

  std::vector<double> t1{0.0, 1.0}, s1{0.5, 1.5};  // count 1
  CHECK(exact_conditional_entropy(t1, s1, e) == 0.0);

  FirstPassageDist d = FirstPassageDist::deterministic_shift(1.0);
  CHECK_THROWS_AS(exact_conditional_entropy(t, s, d), ParameterError);
  std::vector<double> big(9, 0.0);
  CHECK_THROWS_AS(exact_conditional_entropy(big, big, e), SizeError);
}

TEST_CASE("entropy sandwich and the exponential equality case") {
  RngStream rng(1618);
  FirstPassageDist exp1 = FirstPassageDist::exponential(1.0);
  FirstPassageDist gam = FirstPassageDist::gamma(2.0, 1.0);
  int gamma_strict = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = 2 + static_cast<std::size_t>(rng.next_u64() % 5);  // 2..6
    Instance inst = random_instance(m, exp1, rng);
    double log_count = count_admissible(inst.schedule, inst.arrivals).log_count;
    double h = exact_conditional_entropy(inst.schedule, inst.arrivals, exp1);
    CHECK(h >= 0.0);
    CHECK(h <= log_count + 1e-9);
    CHECK(log_count <= std::lgamma(static_cast<double>(m) + 1.0) + 1e-9);
    CHECK(std::abs(h - log_count) < 1e-9);  // equality iff exponential

    Instance ginst = random_instance(m, gam, rng);
    AdmissibleCount gc = count_admissible(ginst.schedule, ginst.arrivals);
    double gh = exact_conditional_entropy(ginst.schedule, ginst.arrivals, gam);
    CHECK(gh <= gc.log_count + 1e-12);
    // strict inequality for non-exponential transport, except on the
    // measure-zero manifold of coincidentally tied weights
    if (*gc.exact >= 2 && gh < gc.log_count - 1e-6) ++gamma_strict;
  }
  CHECK(gamma_strict > 100);  // the strict branch dominates
}

TEST_CASE("H-up bound: closed-form cases") {
  FirstPassageDist e = FirstPassageDist::exponential(1.0);
  std::vector<double> single{0.7};
  CHECK(upper_bound_Ht(single, e) == 0.0);

  std::vector<double> pair0{0.0, 0.0};
  CHECK(upper_bound_Ht(pair0, e) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  std::vector<double> pair1{0.0, 1.0};
  CHECK(upper_bound_Ht(pair1, e) ==
        doctest::Approx(std::exp(-1.0) * std::log(2.0)).epsilon(1e-12));

  // unsorted input is sorted internally
  std::vector<double> unsorted{1.0, 0.0};
  CHECK(upper_bound_Ht(unsorted, e) == upper_bound_Ht(pair1, e));

  std::vector<double> too_big(kMaxExactHt + 1, 0.0);
  CHECK_THROWS_AS(upper_bound_Ht(too_big, e), SizeError);
}

TEST_CASE("H-up DP agrees with the literal sum") {
  RngStream rng(55);
  FirstPassageDist exp1 = FirstPassageDist::exponential(1.0);
  FirstPassageDist gam = FirstPassageDist::gamma(2.0, 1.0);

  std::vector<double> pair0{0.0, 0.0};
  CHECK(brute_force_Ht(pair0, exp1) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  std::vector<double> single{0.3};
  CHECK(brute_force_Ht(single, exp1) == 0.0);

  for (int trial = 0; trial < 100; ++trial) {
    std::size_t m = 1 + static_cast<std::size_t>(rng.next_u64() % 10);  // 1..10
    std::vector<double> t(m);
    for (auto& x : t) x = rng.uniform(0.0, 4.0);
    const FirstPassageDist& dist = (trial % 2 == 0) ? exp1 : gam;
    CHECK(upper_bound_Ht(t, dist) ==
          doctest::Approx(brute_force_Ht(t, dist)).epsilon(1e-10));
  }
  std::vector<double> too_big(kMaxBruteForceHt + 1, 0.0);
  CHECK_THROWS_AS(brute_force_Ht(too_big, exp1), SizeError);
}

TEST_CASE("asymptotic series: frozen oracle values") {
  // Values frozen from an independent term-by-term summation (k -> 200).
  CHECK(asymptotic_ordering_entropy_per_token(1.0) ==
        doctest::Approx(0.5734028091).epsilon(5e-9));
  CHECK(asymptotic_ordering_entropy_per_token(0.1) ==
        doctest::Approx(0.0679041453).epsilon(5e-8));
  CHECK(asymptotic_ordering_entropy_per_token(10.0) ==
        doctest::Approx(2.3535265200).epsilon(5e-9));
  CHECK(asymptotic_ordering_entropy_per_token(0.01) ==
        doctest::Approx(0.0069171160).epsilon(5e-7));
  CHECK_THROWS_AS(asymptotic_ordering_entropy_per_token(0.0), ParameterError);
  CHECK_THROWS_AS(asymptotic_ordering_entropy_per_token(-2.0), ParameterError);
}

TEST_CASE("asymptotic series: identity between the two routes") {
  for (double rho : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    double compact = asymptotic_ordering_entropy_per_token(rho);
    double direct = asymptotic_ordering_entropy_direct(rho);
    CHECK(std::abs(compact - direct) < 1e-9);
  }
}

TEST_CASE("asymptotic series: monotone in load, vanishing at light load") {
  double prev = 0.0;
  for (double rho = 0.01; rho <= 100.0; rho *= 1.3) {
    double v = asymptotic_ordering_entropy_per_token(rho);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(asymptotic_ordering_entropy_per_token(1e-4) < 1e-3);
}

TEST_CASE("Monte Carlo estimator basics") {
  McEstimate one = mc_ordering_entropy_per_token(1, 1.0, 50, 42);
  CHECK(one.estimate == 0.0);
  CHECK(one.stderr_of_mean == 0.0);

  // light load: reordering shoud be rare
  McEstimate light = mc_ordering_entropy_per_token(2000, 0.01, 20, 42);
  CHECK(light.estimate < 0.02);

  // determinism across runs and worker counts (substreams are per trial)
  McEstimate a = mc_ordering_entropy_per_token(200, 1.0, 40, 7);
  McEstimate b = mc_ordering_entropy_per_token(200, 1.0, 40, 7);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_of_mean == b.stderr_of_mean);
}
