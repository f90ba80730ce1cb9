#ifndef TOKENLAB_EXPERIMENTS_HPP
#define TOKENLAB_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tokenlab/channel_variants.hpp"
#include "tokenlab/version.hpp"

namespace tokenlab {

// One bag of knobs for every subcommand; each run_* reads the fields it
// needs.  All grids nonempty; the seed is echoed into every output.
struct ExperimentConfig {
  std::uint64_t seed = kDefaultSeed;
  std::string dist = "exponential(mu=1)";

  // load grid (bounds, capacities, the timing curve of number-vs-timing)
  double rho_min = 1e-3;
  double rho_max = 1e3;
  int points = 200;

  // figure grids
  std::vector<int> payload_lengths{1, 2, 4};
  std::vector<int> parallel_counts{1, 2, 4};
  std::vector<double> epsilons{0.1, 0.2, 0.3};
  std::vector<std::size_t> token_grid;  // per-subcommand defaults apply

  EnergyModel energy{2.0, 2.0, 2.0, 2.0, 0, 4};
  CqBound cq_choice = CqBound::lower;

  // Monte Carlo convergence
  double rho = 1.0;
  std::size_t trials = 20000;

  // guard diagnostic
  double intensity = 1.0;
  double guard_epsilon = 0.1;

  // ordering exact inputs
  std::string schedule_path;
  std::string arrivals_path;
};

std::vector<double> log_spaced_grid(double lo, double hi, int points);

// Each run returns the complete output (leading "# meta:" line included);
// identical configs yield byte-identical content.

// rho,cq_lower_simple,cq_lower,cq_upper,ct_lower,ct_upper (nats, mu = 1).
std::string run_bounds(const ExperimentConfig& cfg);

// power_atp_per_passage,curve_id,rate_bits_per_passage; curve families
// timing_n*, payload_k*, payloadonly_k* over the shared load grid.
std::string run_capacities(const ExperimentConfig& cfg);

// tokens_per_passage,curve_id,rate_nats_per_passage; number_eps* rows over
// the token grid plus the timing lower-bound curve on the same power axis.
std::string run_number_vs_timing(const ExperimentConfig& cfg);

// M,estimate,stderr,asymptote,abs_error plus a trailing summary line.
std::string run_mc_convergence(const ExperimentConfig& cfg);

// tokens,guard_time,m_times_gbar plus a trailing verdict line.
std::string run_guard_diagnostic(const ExperimentConfig& cfg);

// Plain key=value report: admissible count, exact entropy (M <= 8), H-up.
std::string run_ordering_exact(const ExperimentConfig& cfg);

// Series value at cfg.rho.
std::string run_ordering_asymptote(const ExperimentConfig& cfg);

}  // namespace tokenlab

#endif  // TOKENLAB_EXPERIMENTS_HPP
