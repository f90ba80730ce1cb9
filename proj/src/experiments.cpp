#include "tokenlab/experiments.hpp"

#include <cmath>
#include <numeric>
#include <span>

#include "tokenlab/capacity_bounds.hpp"
#include "tokenlab/csv.hpp"
#include "tokenlab/errors.hpp"
#include "tokenlab/first_passage.hpp"
#include "tokenlab/ordering.hpp"
#include "tokenlab/parallel.hpp"
#include "tokenlab/token_channel.hpp"

namespace tokenlab {

namespace {

constexpr double kLn2 = 0.6931471805599453;

class MetaLine {
 public:
  explicit MetaLine(const std::string& subcommand) {
    text_ = std::string("# meta: tool=") + kToolName + " version=" +
            kToolVersion + " subcommand=" + subcommand;
  }
  MetaLine& kv(const std::string& key, const std::string& value) {
    text_ += " " + key + "=" + value;
    return *this;
  }
  MetaLine& kv(const std::string& key, double value) {
    return kv(key, format_g12(value));
  }
  MetaLine& kv(const std::string& key, std::uint64_t value) {
    return kv(key, std::to_string(value));
  }
  template <typename T>
  MetaLine& kv_list(const std::string& key, const std::vector<T>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) joined += ",";
      if constexpr (std::is_floating_point_v<T>)
        joined += format_g12(values[i]);
      else
        joined += std::to_string(values[i]);
    }
    return kv(key, joined);
  }
  std::string str() const { return text_ + "\n"; }

 private:
  std::string text_;
};

std::vector<std::size_t> default_grid(const std::vector<std::size_t>& given,
                                      std::vector<std::size_t> fallback) {
  return given.empty() ? std::move(fallback) : given;
}

std::vector<std::size_t> power_of_two_grid(std::size_t up_to) {
  std::vector<std::size_t> grid;
  for (std::size_t m = 1; m <= up_to; m *= 2) grid.push_back(m);
  return grid;
}

}  // namespace

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ParameterError("grid: need 0 < lo <= hi");
  if (points < 1) throw ParameterError("grid: need at least one point");
  std::vector<double> grid;
  grid.reserve(points);
  if (points == 1) {
    grid.push_back(lo);
    return grid;
  }
  double llo = std::log(lo);
  double lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid.push_back(std::exp(llo + (lhi - llo) * i / (points - 1)));
  return grid;
}

std::string run_bounds(const ExperimentConfig& cfg) {
  std::vector<double> grid = log_spaced_grid(cfg.rho_min, cfg.rho_max, cfg.points);

  std::string out = MetaLine("bounds")
                        .kv("seed", cfg.seed)
                        .kv("rho_min", cfg.rho_min)
                        .kv("rho_max", cfg.rho_max)
                        .kv("points", static_cast<std::uint64_t>(cfg.points))
                        .str();
  out += "rho,cq_lower_simple,cq_lower,cq_upper,ct_lower,ct_upper\n";
  for (double rho : grid) {
    CapacityPoint p = capacity_point(rho, 1.0);
    if (!(p.cq_lower_simple <= p.cq_lower && p.cq_lower <= p.cq_upper) ||
        p.cq_lower < 0.0)
      throw NumericConsistencyError("bounds: ordering violated at rho=" +
                                    format_g12(rho));
    out += format_g12(p.rho) + "," + format_g12(p.cq_lower_simple) + "," +
           format_g12(p.cq_lower) + "," + format_g12(p.cq_upper) + "," +
           format_g12(p.ct_lower) + "," + format_g12(p.ct_upper) + "\n";
  }
  check_no_nonfinite(out);
  return out;
}

std::string run_capacities(const ExperimentConfig& cfg) {
  cfg.energy.validate();
  std::vector<double> grid = log_spaced_grid(cfg.rho_min, cfg.rho_max, cfg.points);
  if (cfg.parallel_counts.empty() || cfg.payload_lengths.empty())
    throw ParameterError("capacities: n and k lists must be nonempty");

  std::string out =
      MetaLine("figures-capacities")
          .kv("seed", cfg.seed)
          .kv("rho_min", cfg.rho_min)
          .kv("rho_max", cfg.rho_max)
          .kv("points", static_cast<std::uint64_t>(cfg.points))
          .kv_list("k", cfg.payload_lengths)
          .kv_list("n", cfg.parallel_counts)
          .kv("c0", cfg.energy.fabrication_plain)
          .kv("c1", cfg.energy.fabrication_payload)
          .kv("dc1", cfg.energy.per_character)
          .kv("ce", cfg.energy.release_transport)
          .kv("b", static_cast<std::uint64_t>(cfg.energy.alphabet))
          .kv("cq", cfg.cq_choice == CqBound::lower ? "lower" : "upper")
          .str();
  out += "power_atp_per_passage,curve_id,rate_bits_per_passage\n";

  // Per-load quantities shared by every curve family (mu = 1, lambda = rho).
  struct LoadPoint {
    double rho;
    double overhead;  // sequencing nats/token
  };
  std::vector<LoadPoint> loads(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    loads[i] = LoadPoint{grid[i], sequencing_overhead_per_token(grid[i])};
  });

  for (int n : cfg.parallel_counts) {
    if (n < 1) throw ParameterError("capacities: parallel count must be >= 1");
    std::string id = "timing_n" + std::to_string(n);
    for (const LoadPoint& lp : loads) {
      ChannelRates r = channel_capacities(lp.rho, lp.rho, 0,
                                          cfg.energy.alphabet, cfg.cq_choice);
      double power = n * power_timing(lp.rho, cfg.energy);
      double rate_bits = n * r.timing / kLn2;
      out += format_g12(power) + "," + id + "," + format_g12(rate_bits) + "\n";
    }
  }
  for (int k : cfg.payload_lengths) {
    if (k < 0) throw ParameterError("capacities: payload length must be >= 0");
    EnergyModel model = cfg.energy;
    model.payload_length = k;
    std::string id = "payload_k" + std::to_string(k);
    for (const LoadPoint& lp : loads) {
      ChannelRates r = channel_capacities(lp.rho, lp.rho, k,
                                          cfg.energy.alphabet, cfg.cq_choice);
      double power = power_payload(lp.rho, lp.rho, model, lp.overhead);
      out += format_g12(power) + "," + id + "," +
             format_g12(r.timing_plus_payload / kLn2) + "\n";
    }
  }
  for (int k : cfg.payload_lengths) {
    EnergyModel model = cfg.energy;
    model.payload_length = k;
    std::string id = "payloadonly_k" + std::to_string(k);
    for (const LoadPoint& lp : loads) {
      ChannelRates r = channel_capacities(lp.rho, lp.rho, k,
                                          cfg.energy.alphabet, cfg.cq_choice);
      double power = power_payload(lp.rho, lp.rho, model, lp.overhead);
      out += format_g12(power) + "," + id + "," + format_g12(r.payload / kLn2) +
             "\n";
    }
  }
  check_no_nonfinite(out);
  return out;
}

std::string run_number_vs_timing(const ExperimentConfig& cfg) {
  if (cfg.epsilons.empty()) throw ParameterError("number-vs-timing: empty eps list");
  std::vector<std::size_t> token_grid =
      default_grid(cfg.token_grid, power_of_two_grid(1024));

  std::string out = MetaLine("figures-number-vs-timing")
                        .kv("seed", cfg.seed)
                        .kv_list("eps", cfg.epsilons)
                        .kv_list("m_grid", token_grid)
                        .kv("points", static_cast<std::uint64_t>(cfg.points))
                        .str();
  out += "tokens_per_passage,curve_id,rate_nats_per_passage\n";

  double power_lo = 0.0, power_hi = 0.0;
  bool first = true;
  for (double eps : cfg.epsilons) {
    std::string id = "number_eps" + format_g12(eps);
    for (std::size_t m : token_grid) {
      NumberChannelPoint p = number_channel_point(m, eps, 1.0);
      out += format_g12(p.normalized_power) + "," + id + "," +
             format_g12(p.rate) + "\n";
      power_lo = first ? p.normalized_power : std::min(power_lo, p.normalized_power);
      power_hi = first ? p.normalized_power : std::max(power_hi, p.normalized_power);
      first = false;
    }
  }

  // Timing lower bound on the same normalized power axis (P = rho).
  for (double rho : log_spaced_grid(power_lo, power_hi, cfg.points)) {
    out += format_g12(rho) + ",timing_lower," + format_g12(rho * cq_lower(rho)) +
           "\n";
  }
  check_no_nonfinite(out);
  return out;
}

std::string run_mc_convergence(const ExperimentConfig& cfg) {
  std::vector<std::size_t> token_grid = default_grid(
      cfg.token_grid, std::vector<std::size_t>{125, 250, 500, 1000, 2000});
  if (!(cfg.rho > 0.0)) throw ParameterError("mc-convergence: rho must be > 0");
  if (cfg.trials < 1) throw ParameterError("mc-convergence: trials must be >= 1");

  std::string out = MetaLine("mc-convergence")
                        .kv("seed", cfg.seed)
                        .kv("rho", cfg.rho)
                        .kv("trials", static_cast<std::uint64_t>(cfg.trials))
                        .kv_list("m_grid", token_grid)
                        .str();
  out += "M,estimate,stderr,asymptote,abs_error\n";

  double asymptote = asymptotic_ordering_entropy_per_token(cfg.rho);
  std::vector<double> errors;
  for (std::size_t m : token_grid) {
    // Distinct base seed per grid entry keeps trial substreams disjoint
    // across rows.
    std::uint64_t row_seed = mix64(cfg.seed ^ (0x9e3779b97f4a7c15ull * m));
    McEstimate est = mc_ordering_entropy_per_token(m, cfg.rho, cfg.trials, row_seed);
    double abs_error = std::abs(est.estimate - asymptote);
    errors.push_back(abs_error);
    out += std::to_string(m) + "," + format_g12(est.estimate) + "," +
           format_g12(est.stderr_of_mean) + "," + format_g12(asymptote) + "," +
           format_g12(abs_error) + "\n";
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) decreasing = false;
  out += std::string("# summary: abs_error_decreasing=") +
         (decreasing ? "true" : "false") + "\n";
  check_no_nonfinite(out);
  return out;
}

std::string run_guard_diagnostic(const ExperimentConfig& cfg) {
  std::vector<std::size_t> token_grid = default_grid(
      cfg.token_grid, std::vector<std::size_t>{10, 100, 1000});
  FirstPassageDist dist = parse_dist_spec(cfg.dist);

  std::string out = MetaLine("guard-diagnostic")
                        .kv("seed", cfg.seed)
                        .kv("dist", dist.describe())
                        .kv("lambda", cfg.intensity)
                        .kv("eps", cfg.guard_epsilon)
                        .kv_list("m_grid", token_grid)
                        .str();
  out += "tokens,guard_time,m_times_gbar\n";
  GuardDiagnostic diag =
      guard_diagnostic(dist, cfg.intensity, cfg.guard_epsilon, token_grid);
  for (const GuardDiagnosticRow& row : diag.rows)
    out += std::to_string(row.tokens) + "," + format_g12(row.guard_time) + "," +
           format_g12(row.tail_mass) + "\n";
  out += std::string("# verdict: ") + diag.verdict() + "\n";
  check_no_nonfinite(out);
  return out;
}

std::string run_ordering_exact(const ExperimentConfig& cfg) {
  FirstPassageDist dist = parse_dist_spec(cfg.dist);
  std::vector<double> schedule =
      read_time_series_csv(cfg.schedule_path, "launch_time");
  std::vector<double> arrivals =
      read_time_series_csv(cfg.arrivals_path, "arrival_time");
  if (schedule.size() != arrivals.size())
    throw ParameterError("ordering exact: schedule/arrival sizes differ");
  if (schedule.empty()) throw ParameterError("ordering exact: empty input");

  std::string out = MetaLine("ordering-exact")
                        .kv("seed", cfg.seed)
                        .kv("dist", dist.describe())
                        .kv("schedule", cfg.schedule_path)
                        .kv("arrivals", cfg.arrivals_path)
                        .str();
  AdmissibleCount count = count_admissible(schedule, arrivals);
  out += "tokens=" + std::to_string(schedule.size()) + "\n";
  out += "log_count_nats=" + format_g12(count.log_count) + "\n";
  if (count.exact) out += "count=" + std::to_string(*count.exact) + "\n";
  if (schedule.size() <= kMaxBruteForcePermutations && dist.has_density())
    out += "exact_conditional_entropy_nats=" +
           format_g12(exact_conditional_entropy(schedule, arrivals, dist)) + "\n";
  if (schedule.size() <= kMaxExactHt)
    out += "upper_bound_nats=" + format_g12(upper_bound_Ht(schedule, dist)) + "\n";
  return out;
}

std::string run_ordering_asymptote(const ExperimentConfig& cfg) {
  std::string out =
      MetaLine("ordering-asymptote").kv("seed", cfg.seed).kv("rho", cfg.rho).str();
  out += "rho=" + format_g12(cfg.rho) + "\n";
  out += "ordering_entropy_per_token_nats=" +
         format_g12(asymptotic_ordering_entropy_per_token(cfg.rho)) + "\n";
  return out;
}

}  // namespace tokenlab
