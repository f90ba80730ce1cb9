#include "tokenlab/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tokenlab/errors.hpp"
#include "tokenlab/parallel.hpp"
#include "tokenlab/stable_sum.hpp"

namespace tokenlab {

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

AdmissibleCount count_admissible(std::span<const double> schedule,
                                 std::span<const double> arrivals) {
  const std::size_t m = schedule.size();
  if (arrivals.size() != m)
    throw ParameterError("count: schedule/arrival sizes differ");
  if (m == 0) return AdmissibleCount{0.0, 1};

  std::vector<double> t = sorted_copy(schedule);
  std::vector<double> s = sorted_copy(arrivals);
  if (s[0] < t[0])
    throw InconsistencyError("count: earliest arrival precedes every launch");

  // log|Omega| = sum_{m=1}^{M-1} log(m+1 - eta_m),
  // eta_m = #{arrivals < t_(m+1)} computed by a two-pointer sweep.
  StableSum log_count;
  std::uint64_t exact = 1;
  std::size_t eta = 0;
  for (std::size_t k = 1; k < m; ++k) {
    while (eta < m && s[eta] < t[k]) ++eta;
    // factor (k+1) - eta with eta counted against boundary t_(k+1)=t[k]
    if (eta > k)
      throw InconsistencyError("count: no causal assignment exists");
    std::size_t factor = k + 1 - eta;
    log_count.add(std::log(static_cast<double>(factor)));
    if (m <= kMaxExactCount) exact *= factor;
  }

  AdmissibleCount out{log_count.get(), std::nullopt};
  if (m <= kMaxExactCount) out.exact = exact;
  return out;
}

AdmissibleCount brute_force_admissible(std::span<const double> schedule,
                                       std::span<const double> arrivals) {
  const std::size_t m = schedule.size();
  if (arrivals.size() != m)
    throw ParameterError("brute force count: schedule/arrival sizes differ");
  if (m > kMaxBruteForcePermutations)
    throw SizeError("brute force count: M exceeds " +
                    std::to_string(kMaxBruteForcePermutations));
  if (m == 0) return AdmissibleCount{0.0, 1};

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::uint64_t count = 0;
  do {
    bool causal = true;
    for (std::size_t i = 0; i < m && causal; ++i)
      causal = arrivals[perm[i]] >= schedule[i];
    count += causal;
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (count == 0)
    throw InconsistencyError("brute force count: no causal assignment exists");
  return AdmissibleCount{std::log(static_cast<double>(count)), count};
}

double exact_conditional_entropy(std::span<const double> schedule,
                                 std::span<const double> arrivals,
                                 const FirstPassageDist& dist) {
  const std::size_t m = schedule.size();
  if (arrivals.size() != m)
    throw ParameterError("entropy: schedule/arrival sizes differ");
  if (m > kMaxBruteForcePermutations)
    throw SizeError("entropy: M exceeds " +
                    std::to_string(kMaxBruteForcePermutations));
  if (!dist.has_density())
    throw ParameterError("entropy: transport law has no evaluable density");
  if (m == 0) return 0.0;

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> weights;
  do {
    double w = 1.0;
    for (std::size_t i = 0; i < m && w > 0.0; ++i)
      w *= dist.density(arrivals[perm[i]] - schedule[i]);
    if (w > 0.0) weights.push_back(w);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (weights.empty())
    throw InconsistencyError("entropy: every permutation is non-causal");

  StableSum total;
  for (double w : weights) total.add(w);
  StableSum h;
  for (double w : weights) {
    double p = w / total.get();
    h.add(-p * std::log(p));
  }
  return std::max(h.get(), 0.0);
}

namespace {

// E[log(1 + Bernoulli-sum)] with success probabilities probs[0..n), by the
// add-one-Bernoulli convolution recurrence in linear probability domain.
double expected_log1p_poisson_binomial(std::span<const double> probs,
                                       std::vector<double>& pmf) {
  const std::size_t n = probs.size();
  pmf.assign(n + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double q = probs[j];
    for (std::size_t k = j + 1; k-- > 0;) {
      double stay = pmf[k] * (1.0 - q);
      double move = pmf[k] * q;
      pmf[k] = stay;
      pmf[k + 1] += move;
      if (pmf[k] < 1e-300) pmf[k] = 0.0;
    }
    if (pmf[j + 1] < 1e-300) pmf[j + 1] = 0.0;
  }
  StableSum e;
  for (std::size_t k = 1; k <= n; ++k)
    if (pmf[k] > 0.0) e.add(pmf[k] * std::log1p(static_cast<double>(k)));
  return e.get();
}

}  // namespace

double upper_bound_Ht(std::span<const double> schedule,
                      const FirstPassageDist& dist) {
  const std::size_t m = schedule.size();
  if (m > kMaxExactHt)
    throw SizeError("H-bound: M exceeds " + std::to_string(kMaxExactHt) +
                    "; use the Monte Carlo estimator for large M");
  if (m <= 1) return 0.0;

  std::vector<double> t = sorted_copy(schedule);
  std::vector<double> straggler_probs(m);
  std::vector<double> pmf;
  StableSum total;
  for (std::size_t k = 1; k < m; ++k) {
    double boundary = t[k];
    for (std::size_t j = 0; j < k; ++j)
      straggler_probs[j] = dist.ccdf(boundary - t[j]);
    total.add(expected_log1p_poisson_binomial(
        std::span<const double>(straggler_probs.data(), k), pmf));
  }
  return total.get();
}

double brute_force_Ht(std::span<const double> schedule,
                      const FirstPassageDist& dist) {
  const std::size_t m = schedule.size();
  if (m > kMaxBruteForceHt)
    throw SizeError("H-bound brute force: M exceeds " +
                    std::to_string(kMaxBruteForceHt));
  if (m <= 1) return 0.0;

  std::vector<double> t = sorted_copy(schedule);
  StableSum total;
  for (std::size_t k = 1; k < m; ++k) {
    double boundary = t[k];
    StableSum term;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      double prob = 1.0;
      unsigned stragglers = 0;
      for (std::size_t j = 0; j < k; ++j) {
        double gbar = dist.ccdf(boundary - t[j]);
        if (mask & (std::uint64_t{1} << j)) {
          prob *= gbar;
          ++stragglers;
        } else {
          prob *= 1.0 - gbar;
        }
      }
      term.add(prob * std::log1p(static_cast<double>(stragglers)));
    }
    total.add(term.get());
  }
  return total.get();
}

McEstimate mc_ordering_entropy_per_token(std::size_t tokens, double rho,
                                         std::size_t trials,
                                         std::uint64_t seed) {
  if (tokens < 1) throw ParameterError("mc: need at least one token");
  if (!(rho > 0.0)) throw ParameterError("mc: rho must be > 0");
  if (trials < 1) throw ParameterError("mc: need at least one trial");

  const double tau = static_cast<double>(tokens) / rho;  // time unit 1/mu
  std::vector<double> per_trial(trials);
  parallel_for(trials, [&](std::size_t trial) {
    RngStream rng = RngStream::substream(seed, trial);
    OptimalInputDensity input(tau, 1.0);
    std::vector<double> t(tokens), s(tokens);
    for (std::size_t i = 0; i < tokens; ++i) {
      t[i] = input.sample(rng);
      s[i] = t[i] + rng.exponential(1.0);
    }
    per_trial[trial] =
        count_admissible(t, s).log_count / static_cast<double>(tokens);
  });

  StableSum sum;
  for (double v : per_trial) sum.add(v);
  double mean = sum.get() / static_cast<double>(trials);
  StableSum sq;
  for (double v : per_trial) sq.add((v - mean) * (v - mean));
  double stderr_of_mean =
      trials > 1 ? std::sqrt(sq.get() / (static_cast<double>(trials - 1) *
                                         static_cast<double>(trials)))
                 : 0.0;
  return McEstimate{mean, stderr_of_mean, trials};
}

namespace {

double series_cutoff(double rho) {
  return rho + 10.0 * std::sqrt(rho) + 20.0;
}

}  // namespace

double asymptotic_ordering_entropy_per_token(double rho, double tolerance) {
  if (!(rho > 0.0)) throw ParameterError("series: rho must be > 0");
  const double cutoff = series_cutoff(rho);
  const double log_rho = std::log(rho);
  StableSum sum;
  for (double l = 2.0;; l += 1.0) {
    double term = std::exp(-rho + l * log_rho - std::lgamma(l + 1.0)) * l *
                  std::log(l);
    sum.add(term);
    if (l >= cutoff && term < tolerance * sum.get()) break;
    if (l > 1e7) throw NumericConsistencyError("series: failed to converge");
  }
  return sum.get() / rho;
}

double asymptotic_ordering_entropy_direct(double rho, double tolerance) {
  if (!(rho > 0.0)) throw ParameterError("series: rho must be > 0");
  const double cutoff = series_cutoff(rho);
  const double log_rho = std::log(rho);
  StableSum sum;
  StableSum magnitude;
  for (double k = 2.0;; k += 1.0) {
    double log_kfact = std::lgamma(k + 1.0);
    double term =
        std::exp(-rho + k * log_rho - log_kfact) * (k / rho - 1.0) * log_kfact;
    sum.add(term);
    magnitude.add(std::abs(term));
    if (k >= cutoff && std::abs(term) < tolerance * magnitude.get()) break;
    if (k > 1e7) throw NumericConsistencyError("series: failed to converge");
  }
  return sum.get();
}

}  // namespace tokenlab
