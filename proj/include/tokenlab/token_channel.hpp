#ifndef TOKENLAB_TOKEN_CHANNEL_HPP
#define TOKENLAB_TOKEN_CHANNEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tokenlab/first_passage.hpp"
#include "tokenlab/rng.hpp"

namespace tokenlab {

// M release times on [0, deadline]; intensity is tied to the deadline by
// lambda * tau = M.
struct LaunchSchedule {
  std::vector<double> times;
  double deadline;

  static LaunchSchedule from_times(std::vector<double> times, double deadline);
  std::size_t tokens() const { return times.size(); }
  double intensity() const { return static_cast<double>(times.size()) / deadline; }
};

// One simulated channel use.  permutation maps sorted position -> launch
// index, so sorted_arrivals[k] == arrivals[permutation[k]] exactly.
// occupancy[m-1] counts arrivals strictly below the m+1-th ascending
// launch boundary (last boundary is +infinity, so occupancy.back() == M).
struct ArrivalRecord {
  std::vector<double> arrivals;
  std::vector<double> sorted_arrivals;
  std::vector<std::size_t> permutation;
  std::vector<std::size_t> occupancy;
  int tie_resamples = 0;
};

// Guard discipline for one channel use: emit M tokens on [0, tau], then
// wait guard_time before the next use.
struct GuardPlan {
  std::size_t tokens;
  double epsilon;
  double guard_time;  // gamma = eps * M / lambda, in time units
  double emission_window;  // tau = M / lambda

  double effective_rate() const {
    return static_cast<double>(tokens) / (emission_window + guard_time);
  }
};

// Transport + sort.  Deterministic given (schedule, dist, stream).  Exact
// arrival ties (zero-measure in theory) reject the draw and resample the
// whole use; tie_resamples reports how often.
ArrivalRecord simulate_channel_use(const LaunchSchedule& schedule,
                                   const FirstPassageDist& dist,
                                   RngStream& rng);

GuardPlan plan_guard(std::size_t tokens, double epsilon, double intensity);

// Lower bound G^M(guard) on the probability that every token of a use
// arrives before the next use begins.
double overrun_bound(std::size_t tokens, double guard_time,
                     const FirstPassageDist& dist);

struct GuardDiagnosticRow {
  std::size_t tokens;
  double guard_time;
  double tail_mass;  // M * Gbar(gamma(M, eps))
};

struct GuardDiagnostic {
  std::vector<GuardDiagnosticRow> rows;
  bool convergent;

  const char* verdict() const { return convergent ? "CONVERGENT" : "NON-CONVERGENT"; }
};

// Tabulates M * Gbar(eps*M/lambda) over the token grid.  Finite-mean laws
// drive the tail to zero; the verdict flags laws whose tail fails to
// decrease (e.g. reciprocal-tail transport).
GuardDiagnostic guard_diagnostic(const FirstPassageDist& dist, double intensity,
                                 double epsilon,
                                 const std::vector<std::size_t>& token_grid);

// CSV exchange format: index,launch_time,arrival_time,sorted_rank.
std::string arrival_record_csv(const LaunchSchedule& schedule,
                               const ArrivalRecord& record);
// Reads a launch or arrival time column; accepts the full record schema
// (picking `column`) or a bare one-value-per-line list.
std::vector<double> read_time_series_csv(const std::string& path,
                                         const std::string& column);

}  // namespace tokenlab

#endif  // TOKENLAB_TOKEN_CHANNEL_HPP
