#include "tokenlab/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "tokenlab/errors.hpp"
#include "tokenlab/stable_sum.hpp"

namespace tokenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

FirstPassageDist FirstPassageDist::exponential(double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential: rate must be > 0");
  FirstPassageDist d;
  d.kind_ = FirstPassageKind::exponential;
  d.rate_ = rate;
  d.mean_ = 1.0 / rate;
  return d;
}

FirstPassageDist FirstPassageDist::gamma(double shape, double rate) {
  if (!(shape > 0.0)) throw ParameterError("gamma: shape must be > 0");
  if (!(rate > 0.0)) throw ParameterError("gamma: rate must be > 0");
  FirstPassageDist d;
  d.kind_ = FirstPassageKind::gamma;
  d.shape_ = shape;
  d.rate_ = rate;
  d.mean_ = shape / rate;
  return d;
}

FirstPassageDist FirstPassageDist::deterministic_shift(double shift) {
  if (!(shift > 0.0)) throw ParameterError("detshift: d0 must be > 0");
  FirstPassageDist d;
  d.kind_ = FirstPassageKind::deterministic_shift;
  d.shift_ = shift;
  d.mean_ = shift;
  return d;
}

FirstPassageDist FirstPassageDist::table(std::vector<TableKnot> knots,
                                         TableTail tail,
                                         bool allow_infinite_mean) {
  if (knots.size() < 2) throw ParameterError("table: need at least two knots");
  std::sort(knots.begin(), knots.end(),
            [](const TableKnot& a, const TableKnot& b) {
              return a.x < b.x || (a.x == b.x && a.cdf < b.cdf);
            });
  if (knots.front().x < 0.0) throw ParameterError("table: knots must have x >= 0");
  if (knots.front().cdf != 0.0)
    throw ParameterError("table: first knot must carry G = 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].cdf < knots[i - 1].cdf)
      throw ParameterError("table: CDF must be nondecreasing");
    if (knots[i].x == knots[i - 1].x && knots[i].cdf != knots[i - 1].cdf)
      throw SingularityError("table: point mass (CDF jump) at x=" +
                             num(knots[i].x));
    if (knots[i].cdf > 1.0) throw ParameterError("table: CDF exceeds 1");
  }

  FirstPassageDist d;
  d.kind_ = FirstPassageKind::table;
  d.knots_ = std::move(knots);
  d.tail_ = tail;

  const TableKnot& last = d.knots_.back();
  double gbar_last = 1.0 - last.cdf;
  if (tail == TableTail::exponential) {
    if (gbar_last > 0.0) {
      const TableKnot& prev = d.knots_[d.knots_.size() - 2];
      double gbar_prev = 1.0 - prev.cdf;
      if (!(gbar_prev > gbar_last))
        throw ParameterError("table: exponential tail needs decreasing CCDF at the end");
      d.tail_rate_ = std::log(gbar_prev / gbar_last) / (last.x - prev.x);
    }
  } else if (!allow_infinite_mean) {
    throw ParameterError(
        "table: reciprocal tail has infinite mean; pass allow_infinite_mean");
  }

  // Piecewise-linear G makes the CCDF integral a trapezoid sum; the tail
  // adds Gbar_last / tail_rate for the exponential case.
  StableSum m;
  for (std::size_t i = 1; i < d.knots_.size(); ++i) {
    double g0 = 1.0 - d.knots_[i - 1].cdf;
    double g1 = 1.0 - d.knots_[i].cdf;
    m.add(0.5 * (g0 + g1) * (d.knots_[i].x - d.knots_[i - 1].x));
  }
  m.add(d.knots_.front().x);  // Gbar = 1 below the first knot
  if (d.tail_ == TableTail::reciprocal && gbar_last > 0.0) {
    d.mean_ = kInf;
  } else {
    if (gbar_last > 0.0) m.add(gbar_last / d.tail_rate_);
    d.mean_ = m.get();
    if (!(d.mean_ > 0.0))
      throw ParameterError("table: mean must be strictly positive");
  }
  return d;
}

bool FirstPassageDist::has_finite_mean() const { return std::isfinite(mean_); }

double FirstPassageDist::density(double d) const {
  if (d < 0.0) return 0.0;
  switch (kind_) {
    case FirstPassageKind::exponential:
      return rate_ * std::exp(-rate_ * d);
    case FirstPassageKind::gamma:
      if (d == 0.0) return shape_ < 1.0 ? kInf : (shape_ == 1.0 ? rate_ : 0.0);
      return std::exp(shape_ * std::log(rate_) + (shape_ - 1.0) * std::log(d) -
                      rate_ * d - std::lgamma(shape_));
    case FirstPassageKind::deterministic_shift:
      throw ParameterError("deterministic-shift law has no density");
    case FirstPassageKind::table: {
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), d,
          [](double v, const TableKnot& k) { return v < k.x; });
      if (it == knots_.begin()) return 0.0;
      if (it == knots_.end()) {
        double gbar_last = 1.0 - knots_.back().cdf;
        if (gbar_last == 0.0) return 0.0;
        if (tail_ == TableTail::reciprocal) {
          double c = gbar_last * (1.0 + knots_.back().x);
          double u = 1.0 + d;
          return c / (u * u);
        }
        return tail_rate_ * gbar_last *
               std::exp(-tail_rate_ * (d - knots_.back().x));
      }
      const TableKnot& hi = *it;
      const TableKnot& lo = *(it - 1);
      return (hi.cdf - lo.cdf) / (hi.x - lo.x);
    }
  }
  return 0.0;
}

double FirstPassageDist::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case FirstPassageKind::exponential:
      return -std::expm1(-rate_ * x);
    case FirstPassageKind::gamma:
      return boost::math::gamma_p(shape_, rate_ * x);
    case FirstPassageKind::deterministic_shift:
      return x >= shift_ ? 1.0 : 0.0;
    case FirstPassageKind::table: {
      if (x <= knots_.front().x) return 0.0;
      if (x >= knots_.back().x) return 1.0 - ccdf(x);
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), x,
          [](double v, const TableKnot& k) { return v < k.x; });
      const TableKnot& hi = *it;
      const TableKnot& lo = *(it - 1);
      double w = (x - lo.x) / (hi.x - lo.x);
      return lo.cdf + w * (hi.cdf - lo.cdf);
    }
  }
  return 0.0;
}

double FirstPassageDist::ccdf(double x) const {
  if (x <= 0.0) return 1.0;
  switch (kind_) {
    case FirstPassageKind::exponential:
      return std::exp(-rate_ * x);
    case FirstPassageKind::gamma:
      return boost::math::gamma_q(shape_, rate_ * x);
    case FirstPassageKind::deterministic_shift:
      return x >= shift_ ? 0.0 : 1.0;
    case FirstPassageKind::table: {
      if (x < knots_.back().x) return 1.0 - cdf(x);
      double gbar_last = 1.0 - knots_.back().cdf;
      if (x == knots_.back().x || gbar_last == 0.0) return gbar_last;
      if (tail_ == TableTail::reciprocal)
        return gbar_last * (1.0 + knots_.back().x) / (1.0 + x);
      return gbar_last * std::exp(-tail_rate_ * (x - knots_.back().x));
    }
  }
  return 0.0;
}

double FirstPassageDist::sample(RngStream& rng) const {
  switch (kind_) {
    case FirstPassageKind::exponential:
      return rng.exponential(rate_);
    case FirstPassageKind::gamma:
      return rng.gamma(shape_, rate_);
    case FirstPassageKind::deterministic_shift:
      return shift_;
    case FirstPassageKind::table: {
      if (!has_finite_mean())
        throw ParameterError("refusing to sample an infinite-mean law");
      double u = rng.uniform01();
      if (u == 1.0) u = std::nextafter(1.0, 0.0);
      double cdf_last = knots_.back().cdf;
      if (u > cdf_last)  // exponential tail inversion
        return knots_.back().x +
               std::log((1.0 - cdf_last) / (1.0 - u)) / tail_rate_;
      auto it = std::lower_bound(
          knots_.begin(), knots_.end(), u,
          [](const TableKnot& k, double v) { return k.cdf < v; });
      if (it == knots_.begin()) return knots_.front().x;
      const TableKnot& hi = *it;
      const TableKnot& lo = *(it - 1);
      if (hi.cdf == lo.cdf) return hi.x;
      double w = (u - lo.cdf) / (hi.cdf - lo.cdf);
      return lo.x + w * (hi.x - lo.x);
    }
  }
  return 0.0;
}

std::string FirstPassageDist::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case FirstPassageKind::exponential:
      os << "exponential(mu=" << rate_ << ")";
      break;
    case FirstPassageKind::gamma:
      os << "gamma(shape=" << shape_ << ",rate=" << rate_ << ")";
      break;
    case FirstPassageKind::deterministic_shift:
      os << "detshift(d0=" << shift_ << ")";
      break;
    case FirstPassageKind::table: {
      os << "table(knots=";
      for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (i) os << ";";
        os << knots_[i].x << ":" << knots_[i].cdf;
      }
      os << ",tail="
         << (tail_ == TableTail::exponential ? "exponential" : "reciprocal");
      if (!has_finite_mean()) os << ",allow_infinite_mean=1";
      os << ")";
      break;
    }
  }
  return os.str();
}

namespace {

struct SpecArgs {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> args;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : args)
      if (k == key) return &v;
    return nullptr;
  }
  double number(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw ParameterError("dist spec: missing parameter '" + key + "'");
    try {
      std::size_t pos = 0;
      double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument{*v};
      return x;
    } catch (const std::exception&) {
      throw ParameterError("dist spec: bad number '" + *v + "' for '" + key + "'");
    }
  }
};

SpecArgs parse_spec_args(const std::string& spec) {
  SpecArgs out;
  std::size_t open = spec.find('(');
  if (open == std::string::npos) {
    out.kind = spec;
    return out;
  }
  if (spec.back() != ')')
    throw ParameterError("dist spec: missing ')' in '" + spec + "'");
  out.kind = spec.substr(0, open);
  std::string body = spec.substr(open + 1, spec.size() - open - 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    std::string item = body.substr(pos, comma - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ParameterError("dist spec: expected name=value, got '" + item + "'");
    out.args.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    pos = comma + 1;
  }
  return out;
}

std::vector<TableKnot> parse_knots(const std::string& text) {
  std::vector<TableKnot> knots;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t semi = text.find(';', pos);
    if (semi == std::string::npos) semi = text.size();
    std::string item = text.substr(pos, semi - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw ParameterError("dist spec: knot must be x:G, got '" + item + "'");
    try {
      knots.push_back(TableKnot{std::stod(item.substr(0, colon)),
                                std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ParameterError("dist spec: bad knot '" + item + "'");
    }
    pos = semi + 1;
  }
  return knots;
}

}  // namespace

FirstPassageDist parse_dist_spec(const std::string& spec) {
  SpecArgs a = parse_spec_args(spec);
  if (a.kind == "exponential")
    return FirstPassageDist::exponential(a.number("mu"));
  if (a.kind == "gamma")
    return FirstPassageDist::gamma(a.number("shape"), a.number("rate"));
  if (a.kind == "detshift" || a.kind == "deterministic-shift")
    return FirstPassageDist::deterministic_shift(a.number("d0"));
  if (a.kind == "table") {
    const std::string* knots = a.find("knots");
    if (!knots) throw ParameterError("dist spec: table needs knots=");
    TableTail tail = TableTail::exponential;
    if (const std::string* t = a.find("tail")) {
      if (*t == "reciprocal")
        tail = TableTail::reciprocal;
      else if (*t != "exponential")
        throw ParameterError("dist spec: unknown tail '" + *t + "'");
    }
    bool allow_inf = a.find("allow_infinite_mean") &&
                     *a.find("allow_infinite_mean") == "1";
    return FirstPassageDist::table(parse_knots(*knots), tail, allow_inf);
  }
  throw ParameterError("dist spec: unknown kind '" + a.kind + "'");
}

std::vector<double> sample_first_passage(const FirstPassageDist& dist,
                                         std::size_t count, RngStream& rng) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dist.sample(rng));
  return out;
}

namespace {

// Adaptive Simpson on [a, b] with absolute tolerance budget.
double simpson(const FirstPassageDist& d, double a, double fa, double b,
               double fb, double m, double fm, double whole, double tol,
               int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = d.ccdf(lm);
  double frm = d.ccdf(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson(d, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson(d, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double mean_via_ccdf_quadrature(const FirstPassageDist& dist, double rel_tol) {
  if (!dist.has_finite_mean()) return kInf;
  // Upper limit where the CCDF is negligible relative to the mean scale.
  double hi = std::max(dist.mean(), 1.0);
  while (dist.ccdf(hi) * hi > 1e-18 * dist.mean() && hi < 1e18) hi *= 2.0;
  double fa = dist.ccdf(0.0);
  double fb = dist.ccdf(hi);
  double m = 0.5 * hi;
  double fm = dist.ccdf(m);
  double whole = hi / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(dist, 0.0, fa, hi, fb, m, fm, whole,
                 rel_tol * std::max(dist.mean(), 1e-300), 48);
}

OptimalInputDensity::OptimalInputDensity(double tau, double mu)
    : deadline(tau), rate(mu) {
  if (tau < 0.0) throw ParameterError("optimal input: deadline must be >= 0");
  if (!(mu > 0.0)) throw ParameterError("optimal input: mu must be > 0");
  double e = std::exp(1.0);
  double z = e + mu * tau;
  mass_at_zero = 1.0 / z;
  mass_at_deadline = (e - 1.0) / z;
  mass_uniform = mu * tau / z;
}

double OptimalInputDensity::sample(RngStream& rng) const {
  double u = rng.uniform01();
  if (u <= mass_at_zero) return 0.0;
  if (u <= mass_at_zero + mass_at_deadline) return deadline;
  return rng.uniform(0.0, deadline);
}

std::vector<double> sample_optimal_input(double tau, double mu,
                                         std::size_t count, RngStream& rng) {
  OptimalInputDensity density(tau, mu);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(density.sample(rng));
  return out;
}

}  // namespace tokenlab
