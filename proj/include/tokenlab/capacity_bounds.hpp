#ifndef TOKENLAB_CAPACITY_BOUNDS_HPP
#define TOKENLAB_CAPACITY_BOUNDS_HPP

namespace tokenlab {

// Closed-form capacity quantities for the deadline-constrained exponential
// timing channel.  All values in nats; bit conversion happens only at the
// presentation layer.

// Maximum entropy of a single arrival S = T + D: log((e + mu*tau)/mu).
double max_entropy_S(double mu, double tau);

// Maximum single-token mutual information: log(1 + mu*tau/e).
double max_mi_single(double mu, double tau);

// max(-log rho, 0).
double cq_lower_simple(double rho);

// log(1/rho) + (1/rho) E[l log l], the ordering-entropy-corrected lower
// bound.  Provably nonnegative; values in (-1e-12, 0) from floating error
// are reported as 0.
double cq_lower(double rho);

// log(1/rho + 4).
double cq_upper(double rho);

// All bounds at load rho = lambda/mu; per-time bounds scale by lambda.
struct CapacityPoint {
  double rho;
  double cq_lower_simple;
  double cq_lower;
  double cq_upper;
  double ct_lower;
  double ct_upper;
};

CapacityPoint capacity_point(double lambda, double mu);

}  // namespace tokenlab

#endif  // TOKENLAB_CAPACITY_BOUNDS_HPP
