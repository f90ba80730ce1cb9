#include "tokenlab/capacity_bounds.hpp"

#include <cmath>

#include "tokenlab/errors.hpp"
#include "tokenlab/ordering.hpp"

namespace tokenlab {

double max_entropy_S(double mu, double tau) {
  if (!(mu > 0.0)) throw ParameterError("max_entropy_S: mu must be > 0");
  if (tau < 0.0) throw ParameterError("max_entropy_S: tau must be >= 0");
  return std::log((std::exp(1.0) + mu * tau) / mu);
}

double max_mi_single(double mu, double tau) {
  if (!(mu > 0.0)) throw ParameterError("max_mi_single: mu must be > 0");
  if (tau < 0.0) throw ParameterError("max_mi_single: tau must be >= 0");
  return std::log1p(mu * tau / std::exp(1.0));
}

double cq_lower_simple(double rho) {
  if (!(rho > 0.0)) throw ParameterError("cq_lower_simple: rho must be > 0");
  double v = std::max(-std::log(rho), 0.0);
  return v == 0.0 ? 0.0 : v;  // normalize -0
}

double cq_lower(double rho) {
  if (!(rho > 0.0)) throw ParameterError("cq_lower: rho must be > 0");
  double v = -std::log(rho) + asymptotic_ordering_entropy_per_token(rho);
  if (v < 0.0 && v > -1e-12) return 0.0;
  return v;
}

double cq_upper(double rho) {
  if (!(rho > 0.0)) throw ParameterError("cq_upper: rho must be > 0");
  return std::log(1.0 / rho + 4.0);
}

CapacityPoint capacity_point(double lambda, double mu) {
  if (!(lambda > 0.0)) throw ParameterError("capacity_point: lambda must be > 0");
  if (!(mu > 0.0)) throw ParameterError("capacity_point: mu must be > 0");
  double rho = lambda / mu;
  CapacityPoint p;
  p.rho = rho;
  p.cq_lower_simple = cq_lower_simple(rho);
  p.cq_lower = cq_lower(rho);
  p.cq_upper = cq_upper(rho);
  p.ct_lower = lambda * p.cq_lower;
  p.ct_upper = lambda * p.cq_upper;
  return p;
}

}  // namespace tokenlab
