#ifndef TOKENLAB_ORDERING_HPP
#define TOKENLAB_ORDERING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tokenlab/first_passage.hpp"
#include "tokenlab/version.hpp"

namespace tokenlab {

// Exact-enumeration caps.
inline constexpr std::size_t kMaxBruteForcePermutations = 8;
inline constexpr std::size_t kMaxExactCount = 20;
inline constexpr std::size_t kMaxBruteForceHt = 10;
inline constexpr std::size_t kMaxExactHt = 512;

// Number of causal assignments of arrivals to launches.  log_count is
// always populated (nats); exact is provided for M <= 20 where the count
// fits comfortably in 64 bits.
struct AdmissibleCount {
  double log_count;
  std::optional<std::uint64_t> exact;
};

// Product-formula count over launch-boundary occupancies.  Invariant
// under permutations of either argument; inputs may arrive unsorted.
// Throws InconsistencyError when no causal assignment exists.
AdmissibleCount count_admissible(std::span<const double> schedule,
                                 std::span<const double> arrivals);

// Direct enumeration over all M! assignments (M <= 8); test oracle for
// count_admissible.
AdmissibleCount brute_force_admissible(std::span<const double> schedule,
                                       std::span<const double> arrivals);

// H(Omega | sorted arrivals, schedule) in nats by enumerating causal
// permutations weighted by the transit density (M <= 8).  Equals
// log(count) exactly when the transport law is exponential.
double exact_conditional_entropy(std::span<const double> schedule,
                                 std::span<const double> arrivals,
                                 const FirstPassageDist& dist);

// Computable upper bound on the expected ordering entropy for a fixed
// schedule: sum over boundaries of E[log(1 + straggler count)], straggler
// counts being Poisson-binomial over CCDF values.  O(M^3); exact for
// M <= kMaxExactHt, larger requests are directed to the Monte Carlo
// estimator.
double upper_bound_Ht(std::span<const double> schedule,
                      const FirstPassageDist& dist);

// Literal 2^m-term evaluation of the same bound (M <= 10); oracle for the
// convolution recurrence.
double brute_force_Ht(std::span<const double> schedule,
                      const FirstPassageDist& dist);

struct McEstimate {
  double estimate;
  double stderr_of_mean;
  std::size_t trials;
};

// Monte Carlo estimate of the per-token ordering entropy for exponential
// transport (the equality case of the computable bound): launches i.i.d.
// from the optimal input density on [0, M/rho], transit Exp(1), averaging
// log(count)/M.  Trials run on substreams keyed by trial index, so the
// result is independent of worker count.  The defaults give a standard
// error around 1% of the value at rho = 1.
McEstimate mc_ordering_entropy_per_token(std::size_t tokens, double rho,
                                         std::size_t trials = 200,
                                         std::uint64_t seed = kDefaultSeed);

// Asymptotic per-token ordering entropy (1/rho) E[l log l] over
// Poisson(rho), summed in the compact form.  Truncation: term below
// tolerance * accumulated once past rho + 10*sqrt(rho) + 20.
double asymptotic_ordering_entropy_per_token(double rho,
                                             double tolerance = 1e-12);

// Same limit summed term-by-term in the original series
// sum_k e^-rho rho^k/k! (k/rho - 1) log k!; kept as an independent route
// for the series-identity check.
double asymptotic_ordering_entropy_direct(double rho,
                                          double tolerance = 1e-12);

}  // namespace tokenlab

#endif  // TOKENLAB_ORDERING_HPP
