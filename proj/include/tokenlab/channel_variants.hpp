#ifndef TOKENLAB_CHANNEL_VARIANTS_HPP
#define TOKENLAB_CHANNEL_VARIANTS_HPP

#include <cstddef>

namespace tokenlab {

// Per-token energy accounting.  Costs are in whatever energy unit the
// caller adopts (the figure pipelines use ATP); b is the payload alphabet
// size, payload_length the characters per token.
struct EnergyModel {
  double fabrication_plain;    // c0: token without payload
  double fabrication_payload;  // c1: payload token base
  double per_character;        // delta c1
  double release_transport;    // ce
  int payload_length = 0;      // K
  int alphabet = 4;            // b

  void validate() const;
};

// Timing-only transmitter power: lambda * (c0 + ce).
double power_timing(double lambda, const EnergyModel& model);

// Timing-plus-payload power upper bound:
// lambda * (c1 + ce + (h_up/log b + K) * dc1), with the sequencing
// overhead h_up (nats/token) converted to characters.
double power_payload(double lambda, double rho, const EnergyModel& model,
                     double ordering_entropy_per_token);

enum class CqBound { lower, upper };

// Rates of the timing, timing+payload, and payload-only channels at load
// rho (nats per unit time).  payload == timing_plus_payload - timing holds
// bit-exactly.
struct ChannelRates {
  double timing;
  double timing_plus_payload;
  double payload;
};

ChannelRates channel_capacities(double lambda, double rho, int payload_length,
                                int alphabet, CqBound bound = CqBound::lower);

// Per-token side information needed to resequence payload fragments:
// the asymptotic ordering entropy for exponential transport.
double sequencing_overhead_per_token(double rho);

// Power-constrained capacity of individually identifiable tokens
// (M parallel single-token channels): rho * log(1 + e^(P/rho)/(rho e)),
// evaluated overflow-safely.  Tends to P as rho -> 0.
double identifiable_capacity(double rho, double power);

// Number/concentration channel operating point parameterized by the
// maximum count M.
struct NumberChannelPoint {
  std::size_t max_tokens;        // M
  double epsilon;                // per-use failure probability
  double interval;               // tau(M)
  double intensity;              // lambda(M)
  double expected_spans;         // zbar(M)
  double rate;                   // C~_N, nats per passage time
  double normalized_power;       // lambda(M)/mu
};

NumberChannelPoint number_channel_point(std::size_t max_tokens, double epsilon,
                                        double mu);

// zbar by the direct series sum_z (1 - (1 - eps^z)^M), truncated at 1e-15.
double expected_spans(std::size_t max_tokens, double epsilon);
// Alternating binomial form -sum_n C(M,n)(-1)^n/(1-eps^n); cancels badly
// for large M, kept as a small-M (<= 20) oracle.
double expected_spans_binomial(std::size_t max_tokens, double epsilon);

}  // namespace tokenlab

#endif  // TOKENLAB_CHANNEL_VARIANTS_HPP
