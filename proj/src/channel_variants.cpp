#include "tokenlab/channel_variants.hpp"

#include <cmath>

#include "tokenlab/capacity_bounds.hpp"
#include "tokenlab/errors.hpp"
#include "tokenlab/ordering.hpp"
#include "tokenlab/stable_sum.hpp"

namespace tokenlab {

void EnergyModel::validate() const {
  if (fabrication_plain < 0.0 || fabrication_payload < 0.0 ||
      per_character < 0.0 || release_transport < 0.0)
    throw ParameterError("energy model: costs must be >= 0");
  if (payload_length < 0)
    throw ParameterError("energy model: payload length must be >= 0");
  if (alphabet < 2) throw ParameterError("energy model: alphabet must be >= 2");
}

double power_timing(double lambda, const EnergyModel& model) {
  if (!(lambda > 0.0)) throw ParameterError("power: lambda must be > 0");
  model.validate();
  return lambda * (model.fabrication_plain + model.release_transport);
}

double power_payload(double lambda, double rho, const EnergyModel& model,
                     double ordering_entropy_per_token) {
  if (!(lambda > 0.0)) throw ParameterError("power: lambda must be > 0");
  if (!(rho > 0.0)) throw ParameterError("power: rho must be > 0");
  if (ordering_entropy_per_token < 0.0)
    throw ParameterError("power: ordering entropy must be >= 0");
  model.validate();
  double sequencing_chars =
      ordering_entropy_per_token / std::log(static_cast<double>(model.alphabet));
  return lambda * (model.fabrication_payload + model.release_transport +
                   (sequencing_chars + model.payload_length) * model.per_character);
}

ChannelRates channel_capacities(double lambda, double rho, int payload_length,
                                int alphabet, CqBound bound) {
  if (!(lambda > 0.0)) throw ParameterError("capacities: lambda must be > 0");
  if (!(rho > 0.0)) throw ParameterError("capacities: rho must be > 0");
  if (payload_length < 0) throw ParameterError("capacities: K must be >= 0");
  if (alphabet < 2) throw ParameterError("capacities: alphabet must be >= 2");

  double cq = bound == CqBound::lower ? cq_lower(rho) : cq_upper(rho);
  ChannelRates r;
  r.timing = lambda * cq;
  r.timing_plus_payload =
      r.timing + lambda * payload_length * std::log(static_cast<double>(alphabet));
  // Defined as the difference so the identity survives rounding.
  r.payload = r.timing_plus_payload - r.timing;
  return r;
}

double sequencing_overhead_per_token(double rho) {
  return asymptotic_ordering_entropy_per_token(rho);
}

double identifiable_capacity(double rho, double power) {
  if (!(rho > 0.0)) throw ParameterError("identifiable: rho must be > 0");
  if (!(power > 0.0)) throw ParameterError("identifiable: power must be > 0");
  double log_arg = power / rho - std::log(rho * std::exp(1.0));
  if (log_arg > 36.0)  // e^x dominates the +1; log(1+e^x) = x to 1e-16
    return rho * log_arg;
  return rho * std::log1p(std::exp(log_arg));
}

double expected_spans(std::size_t max_tokens, double epsilon) {
  if (max_tokens < 1) throw ParameterError("spans: M must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("spans: epsilon must lie in (0, 1)");
  const double m = static_cast<double>(max_tokens);
  StableSum sum;
  double log_eps = std::log(epsilon);
  for (int z = 0;; ++z) {
    double eps_z = std::exp(z * log_eps);
    // 1 - (1-eps^z)^M without cancellation
    double term = -std::expm1(m * std::log1p(-eps_z));
    sum.add(term);
    if (term < 1e-15) break;
  }
  return sum.get();
}

double expected_spans_binomial(std::size_t max_tokens, double epsilon) {
  if (max_tokens > 20)
    throw SizeError("spans binomial: cancellation-prone beyond M = 20");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("spans: epsilon must lie in (0, 1)");
  const std::size_t m = max_tokens;
  StableSum sum;
  double binom = 1.0;  // C(M, n) built incrementally
  for (std::size_t n = 1; n <= m; ++n) {
    binom *= static_cast<double>(m - n + 1) / static_cast<double>(n);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum.add(-binom * sign / (1.0 - std::pow(epsilon, static_cast<double>(n))));
  }
  return sum.get();
}

NumberChannelPoint number_channel_point(std::size_t max_tokens, double epsilon,
                                        double mu) {
  if (max_tokens < 1) throw ParameterError("number channel: M must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("number channel: epsilon must lie in (0, 1)");
  if (!(mu > 0.0)) throw ParameterError("number channel: mu must be > 0");

  const double m = static_cast<double>(max_tokens);
  // tau(M) = -(1/mu) log(1 - (1-eps)^(1/M)); arranged via expm1/log1p.
  double mu_tau = -std::log(-std::expm1(std::log1p(-epsilon) / m));
  NumberChannelPoint p;
  p.max_tokens = max_tokens;
  p.epsilon = epsilon;
  p.interval = mu_tau / mu;
  p.intensity = mu * m / (2.0 * mu_tau);
  p.expected_spans = expected_spans(max_tokens, epsilon);
  p.rate = std::log(m + 1.0) / (p.expected_spans * mu_tau);
  p.normalized_power = p.intensity / mu;
  return p;
}

}  // namespace tokenlab
