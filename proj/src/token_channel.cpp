#include "tokenlab/token_channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tokenlab/csv.hpp"
#include "tokenlab/errors.hpp"

namespace tokenlab {

LaunchSchedule LaunchSchedule::from_times(std::vector<double> times,
                                          double deadline) {
  if (!(deadline > 0.0)) throw ParameterError("schedule: deadline must be > 0");
  for (double t : times)
    if (t < 0.0 || t > deadline)
      throw ParameterError("schedule: launch time outside [0, deadline]");
  return LaunchSchedule{std::move(times), deadline};
}

namespace {

bool has_adjacent_tie(const std::vector<double>& sorted) {
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

}  // namespace

ArrivalRecord simulate_channel_use(const LaunchSchedule& schedule,
                                   const FirstPassageDist& dist,
                                   RngStream& rng) {
  if (!dist.has_finite_mean())
    throw ParameterError("simulate: transport law must have finite mean");
  const std::size_t m = schedule.tokens();

  ArrivalRecord rec;
  for (;;) {
    rec.arrivals.clear();
    rec.arrivals.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
      rec.arrivals.push_back(schedule.times[i] + dist.sample(rng));

    rec.permutation.resize(m);
    std::iota(rec.permutation.begin(), rec.permutation.end(), std::size_t{0});
    std::stable_sort(rec.permutation.begin(), rec.permutation.end(),
                     [&](std::size_t a, std::size_t b) {
                       return rec.arrivals[a] < rec.arrivals[b];
                     });
    rec.sorted_arrivals.resize(m);
    for (std::size_t k = 0; k < m; ++k)
      rec.sorted_arrivals[k] = rec.arrivals[rec.permutation[k]];

    if (!has_adjacent_tie(rec.sorted_arrivals)) break;
    ++rec.tie_resamples;  // zero-measure event; keep strict ordering
  }

  // Occupancies against the ascending launch boundaries.
  std::vector<double> sorted_times = schedule.times;
  std::sort(sorted_times.begin(), sorted_times.end());
  rec.occupancy.resize(m);
  std::size_t count = 0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    double boundary = sorted_times[k + 1];
    while (count < m && rec.sorted_arrivals[count] < boundary) ++count;
    rec.occupancy[k] = count;
  }
  if (m > 0) rec.occupancy[m - 1] = m;
  return rec;
}

GuardPlan plan_guard(std::size_t tokens, double epsilon, double intensity) {
  if (tokens < 1) throw ParameterError("guard: need at least one token");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("guard: epsilon must lie in (0, 1)");
  if (!(intensity > 0.0)) throw ParameterError("guard: intensity must be > 0");
  double m = static_cast<double>(tokens);
  return GuardPlan{tokens, epsilon, epsilon * m / intensity, m / intensity};
}

double overrun_bound(std::size_t tokens, double guard_time,
                     const FirstPassageDist& dist) {
  if (guard_time < 0.0) throw ParameterError("overrun: guard time must be >= 0");
  return std::pow(dist.cdf(guard_time), static_cast<double>(tokens));
}

GuardDiagnostic guard_diagnostic(const FirstPassageDist& dist, double intensity,
                                 double epsilon,
                                 const std::vector<std::size_t>& token_grid) {
  if (!(intensity > 0.0)) throw ParameterError("diagnostic: intensity must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ParameterError("diagnostic: epsilon must lie in (0, 1)");
  if (token_grid.empty()) throw ParameterError("diagnostic: empty token grid");

  GuardDiagnostic diag;
  diag.rows.reserve(token_grid.size());
  for (std::size_t m : token_grid) {
    double gamma = epsilon * static_cast<double>(m) / intensity;
    diag.rows.push_back(
        GuardDiagnosticRow{m, gamma, static_cast<double>(m) * dist.ccdf(gamma)});
  }

  // Convergent iff the tail half of the table keeps strictly decreasing
  // toward 0 (exact zeros count as arrived).
  std::size_t n = diag.rows.size();
  std::size_t start = n / 2;
  if (start == 0 && n > 1) start = 1;
  diag.convergent = true;
  for (std::size_t i = start; i < n; ++i) {
    double prev = diag.rows[i - 1].tail_mass;
    double cur = diag.rows[i].tail_mass;
    if (!(cur < prev || cur == 0.0)) diag.convergent = false;
  }
  if (n == 1) diag.convergent = diag.rows[0].tail_mass < 1.0;
  return diag;
}

std::string arrival_record_csv(const LaunchSchedule& schedule,
                               const ArrivalRecord& record) {
  const std::size_t m = schedule.tokens();
  // sorted rank of launch index i is the inverse permutation
  std::vector<std::size_t> rank(m);
  for (std::size_t k = 0; k < m; ++k) rank[record.permutation[k]] = k;

  std::string out = "index,launch_time,arrival_time,sorted_rank\n";
  for (std::size_t i = 0; i < m; ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_g12(schedule.times[i]);
    out += ',';
    out += format_g12(record.arrivals[i]);
    out += ',';
    out += std::to_string(rank[i]);
    out += '\n';
  }
  return out;
}

std::vector<double> read_time_series_csv(const std::string& path,
                                         const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<double> values;
  std::string line;
  int column_index = -1;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      first = false;
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] == column) column_index = static_cast<int>(i);
      if (column_index >= 0) continue;  // header row consumed
      column_index = fields.size() > 1 ? -2 : 0;
      if (column_index == -2)
        throw IoError("'" + path + "': multi-column file lacks column '" +
                      column + "'");
    }
    if (static_cast<std::size_t>(column_index) >= fields.size())
      throw IoError("'" + path + "': short row '" + line + "'");
    try {
      values.push_back(std::stod(fields[column_index]));
    } catch (const std::exception&) {
      throw IoError("'" + path + "': bad number '" + fields[column_index] + "'");
    }
  }
  return values;
}

}  // namespace tokenlab
