#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "tokenlab/errors.hpp"
#include "tokenlab/token_channel.hpp"

using namespace tokenlab;

TEST_CASE("constant transit preserves launch order") {
  auto schedule = LaunchSchedule::from_times({0.0, 2.0}, 2.0);
  FirstPassageDist d = FirstPassageDist::deterministic_shift(1.0);
  RngStream rng(1);
  ArrivalRecord rec = simulate_channel_use(schedule, d, rng);
  CHECK(rec.arrivals == std::vector<double>{1.0, 3.0});
  CHECK(rec.sorted_arrivals == std::vector<double>{1.0, 3.0});
  CHECK(rec.permutation == std::vector<std::size_t>{0, 1});
}

TEST_CASE("record invariants on simulated uses") {
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  RngStream rng(23);
  auto schedule = LaunchSchedule::from_times({0.0, 0.5, 0.5, 2.0, 3.75}, 4.0);
  for (int use = 0; use < 200; ++use) {
    ArrivalRecord rec = simulate_channel_use(schedule, d, rng);
    const std::size_t m = schedule.tokens();
    // permutation is a bijection applying s -> sorted s, exactly
    std::vector<bool> seen(m, false);
    for (std::size_t k = 0; k < m; ++k) {
      CHECK(!seen[rec.permutation[k]]);
      seen[rec.permutation[k]] = true;
      CHECK(rec.sorted_arrivals[k] == rec.arrivals[rec.permutation[k]]);
      if (k) CHECK(rec.sorted_arrivals[k] > rec.sorted_arrivals[k - 1]);
    }
    // causality
    for (std::size_t i = 0; i < m; ++i)
      CHECK(rec.arrivals[i] >= schedule.times[i]);
    // occupancies nondecreasing, terminal value M
    for (std::size_t i = 1; i < m; ++i)
      CHECK(rec.occupancy[i] >= rec.occupancy[i - 1]);
    CHECK(rec.occupancy.back() == m);
  }
}

TEST_CASE("determinism: identical seed, identical record") {
  auto schedule = LaunchSchedule::from_times({0.0, 1.0, 2.0, 3.0}, 4.0);
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  RngStream a(12345), b(12345);
  ArrivalRecord ra = simulate_channel_use(schedule, d, a);
  ArrivalRecord rb = simulate_channel_use(schedule, d, b);
  CHECK(ra.arrivals == rb.arrivals);
  CHECK(ra.sorted_arrivals == rb.sorted_arrivals);
  CHECK(ra.permutation == rb.permutation);
  CHECK(ra.occupancy == rb.occupancy);
  CHECK(arrival_record_csv(schedule, ra) == arrival_record_csv(schedule, rb));
}

TEST_CASE("equal launches make the permutation uniform (chi-square)") {
  // M = 3, all launches at 0: exchangeability forces Omega ~ uniform on 6
  // classes.  alpha = 0.001 critical value for chi2(5) is 20.515.
  auto schedule = LaunchSchedule::from_times({0.0, 0.0, 0.0}, 1.0);
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  RngStream rng(99);
  const int uses = 100000;
  std::map<std::vector<std::size_t>, int> counts;
  for (int u = 0; u < uses; ++u)
    counts[simulate_channel_use(schedule, d, rng).permutation]++;
  CHECK(counts.size() == 6);
  double expected = uses / 6.0;
  double chi2 = 0.0;
  for (const auto& [perm, n] : counts)
    chi2 += (n - expected) * (n - expected) / expected;
  CHECK(chi2 < 20.515);
}

TEST_CASE("exchangeability: permuting the schedule leaves sorted arrivals alone") {
  // Two-sample KS on the first sorted arrival, 1e5 uses per arm; the
  // alpha = 0.001 threshold is 1.94947 * sqrt(2/n).
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  auto t1 = LaunchSchedule::from_times({0.1, 0.7, 1.3, 2.9}, 3.0);
  auto t2 = LaunchSchedule::from_times({2.9, 0.1, 1.3, 0.7}, 3.0);
  const std::size_t n = 100000;
  std::vector<double> a(n), b(n);
  RngStream ra(1001), rb(2002);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = simulate_channel_use(t1, d, ra).sorted_arrivals[0];
    b[i] = simulate_channel_use(t2, d, rb).sorted_arrivals[0];
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double ks = 0.0;
  std::size_t i = 0, j = 0;
  while (i < n && j < n) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    ks = std::max(ks, std::abs(static_cast<double>(i) - static_cast<double>(j)) /
                          static_cast<double>(n));
  }
  CHECK(ks < 1.94947 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("guard plan") {
  GuardPlan p = plan_guard(100, 0.01, 1.0);
  CHECK(p.guard_time == doctest::Approx(1.0));
  CHECK(p.emission_window == doctest::Approx(100.0));

  GuardPlan q = plan_guard(10, 0.5, 2.0);
  CHECK(q.guard_time == doctest::Approx(2.5));
  CHECK(q.emission_window == doctest::Approx(5.0));

  // effective rate lambda/(1+eps) independent of M
  for (std::size_t m : {1ul, 10ul, 1000ul, 123456ul}) {
    GuardPlan g = plan_guard(m, 0.25, 2.0);
    CHECK(g.effective_rate() == doctest::Approx(2.0 / 1.25).epsilon(1e-12));
  }

  CHECK_THROWS_AS(plan_guard(0, 0.1, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_guard(10, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(plan_guard(10, 1.0, 1.0), ParameterError);
}

TEST_CASE("overrun bound") {
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  CHECK(overrun_bound(10, 10.0, d) ==
        doctest::Approx(std::pow(1.0 - std::exp(-10.0), 10.0)).epsilon(1e-12));
  CHECK(overrun_bound(1, 0.0, d) == 0.0);
  CHECK(overrun_bound(7, 0.0, d) == 0.0);
  // union-bound oracle: G^M(gamma) >= 1 - M*Gbar(gamma)
  double lower = 1.0 - 1000.0 * std::exp(-20.0);
  CHECK(overrun_bound(1000, 20.0, d) >= lower);
  CHECK(overrun_bound(1000, 20.0, d) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("guard diagnostic converges for exponential transport") {
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  GuardDiagnostic diag = guard_diagnostic(d, 1.0, 0.1, {10, 100, 1000});
  REQUIRE(diag.rows.size() == 3);
  CHECK(diag.rows[1].tail_mass ==
        doctest::Approx(100.0 * std::exp(-10.0)).epsilon(1e-12));
  CHECK(diag.rows[2].tail_mass ==
        doctest::Approx(1000.0 * std::exp(-100.0)).epsilon(1e-9));
  CHECK(diag.convergent);
  CHECK(std::string(diag.verdict()) == "CONVERGENT");
}

TEST_CASE("guard diagnostic flags the infinite-mean reciprocal tail") {
  // Gbar(x) = 1/(1+x) for x >= 1; M * Gbar(0.1 M) -> 10, never vanishing.
  FirstPassageDist p = FirstPassageDist::table({{0.0, 0.0}, {1.0, 0.5}},
                                               TableTail::reciprocal, true);
  GuardDiagnostic diag = guard_diagnostic(p, 1.0, 0.1, {10, 100, 1000});
  CHECK(diag.rows[0].tail_mass == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(diag.rows[1].tail_mass == doctest::Approx(100.0 / 11.0).epsilon(1e-12));
  CHECK(!diag.convergent);
  CHECK(std::string(diag.verdict()) == "NON-CONVERGENT");
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(LaunchSchedule::from_times({0.0, 3.0}, 2.0), ParameterError);
  CHECK_THROWS_AS(LaunchSchedule::from_times({-0.1}, 2.0), ParameterError);
  CHECK_THROWS_AS(LaunchSchedule::from_times({0.0}, 0.0), ParameterError);
}

TEST_CASE("simulation refuses infinite-mean transport") {
  FirstPassageDist p = FirstPassageDist::table({{0.0, 0.0}, {1.0, 0.5}},
                                               TableTail::reciprocal, true);
  auto schedule = LaunchSchedule::from_times({0.0, 1.0}, 2.0);
  RngStream rng(3);
  CHECK_THROWS_AS(simulate_channel_use(schedule, p, rng), ParameterError);
}

TEST_CASE("arrival record CSV round trip") {
  auto schedule = LaunchSchedule::from_times({0.0, 1.0, 0.25}, 2.0);
  FirstPassageDist d = FirstPassageDist::exponential(1.0);
  RngStream rng(5);
  ArrivalRecord rec = simulate_channel_use(schedule, d, rng);
  std::string csv = arrival_record_csv(schedule, rec);

  std::string path = "tc_roundtrip.csv";
  {
    FILE* f = fopen(path.c_str(), "wb");
    REQUIRE(f);
    fwrite(csv.data(), 1, csv.size(), f);
    fclose(f);
  }
  auto launches = read_time_series_csv(path, "launch_time");
  auto arrivals = read_time_series_csv(path, "arrival_time");
  REQUIRE(launches.size() == 3);
  REQUIRE(arrivals.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(launches[i] == doctest::Approx(schedule.times[i]).epsilon(1e-9));
    CHECK(arrivals[i] == doctest::Approx(rec.arrivals[i]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(read_time_series_csv("does_not_exist.csv", "launch_time"),
                  IoError);
  std::remove(path.c_str());
}
