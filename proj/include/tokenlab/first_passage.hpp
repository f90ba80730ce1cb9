#ifndef TOKENLAB_FIRST_PASSAGE_HPP
#define TOKENLAB_FIRST_PASSAGE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tokenlab/rng.hpp"

namespace tokenlab {

enum class FirstPassageKind { exponential, gamma, deterministic_shift, table };

// Tail extrapolation for table-defined laws beyond the last knot.
enum class TableTail {
  exponential,  // fitted to the last two knots; finite mean
  reciprocal    // Gbar ~ c/(1+x); infinite mean, needs explicit opt-in
};

struct TableKnot {
  double x;
  double cdf;
};

// Immutable first-passage time law: causal density g, CDF G, CCDF Gbar.
// Values are freely shareable across threads; sampling takes an explicit
// caller-owned stream.
class FirstPassageDist {
 public:
  static FirstPassageDist exponential(double rate);
  static FirstPassageDist gamma(double shape, double rate);
  // Degenerate transit of fixed positive duration.  Exempt from the
  // no-point-mass rule; it has no density (has_density() is false).
  static FirstPassageDist deterministic_shift(double shift);
  // Piecewise-linear CDF between knots.  First knot must be (x0 >= 0, 0);
  // equal-x knots with a CDF jump are rejected as singular.  A reciprocal
  // tail yields an infinite mean and requires allow_infinite_mean (such a
  // law is accepted only by guard diagnostics, never for sampling).
  static FirstPassageDist table(std::vector<TableKnot> knots, TableTail tail,
                                bool allow_infinite_mean = false);

  FirstPassageKind kind() const { return kind_; }
  double density(double d) const;
  double cdf(double x) const;
  double ccdf(double x) const;
  double mean() const { return mean_; }
  bool has_finite_mean() const;
  bool has_density() const { return kind_ != FirstPassageKind::deterministic_shift; }
  double sample(RngStream& rng) const;
  // Canonical spec string, e.g. "exponential(mu=2)"; round-trips through
  // parse_dist_spec.
  std::string describe() const;

 private:
  FirstPassageDist() = default;

  FirstPassageKind kind_ = FirstPassageKind::exponential;
  double rate_ = 1.0;
  double shape_ = 1.0;
  double shift_ = 0.0;
  double mean_ = 1.0;
  std::vector<TableKnot> knots_;
  TableTail tail_ = TableTail::exponential;
  double tail_rate_ = 0.0;  // decay of the fitted exponential tail
};

// Parses "kind(name=value,...)" distribution specs:
//   exponential(mu=1) | gamma(shape=2,rate=1) | detshift(d0=2)
//   table(knots=x:G;x:G;...,tail=exponential|reciprocal[,allow_infinite_mean=1])
FirstPassageDist parse_dist_spec(const std::string& spec);

std::vector<double> sample_first_passage(const FirstPassageDist& dist,
                                         std::size_t count, RngStream& rng);

// E[D] by adaptive quadrature of the CCDF; independent of the closed-form
// mean, used as a consistency oracle.
double mean_via_ccdf_quadrature(const FirstPassageDist& dist,
                                double rel_tol = 1e-9);

// Entropy-maximizing launch density for exponential first passage under a
// deadline: atoms at 0 and tau plus a uniform component.  The tau atom
// carries (e-1)/(e+mu*tau): the sign-flipped (1-e)/(e+mu*tau) variant seen
// in some derivations is negative, and (e-1) is the unique nonnegative
// weight normalizing the mixture.
struct OptimalInputDensity {
  double deadline;  // tau
  double rate;      // mu
  double mass_at_zero;
  double mass_at_deadline;
  double mass_uniform;

  OptimalInputDensity(double tau, double mu);
  double sample(RngStream& rng) const;
};

std::vector<double> sample_optimal_input(double tau, double mu,
                                         std::size_t count, RngStream& rng);

}  // namespace tokenlab

#endif  // TOKENLAB_FIRST_PASSAGE_HPP
