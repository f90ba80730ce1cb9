#ifndef TOKENLAB_STABLE_SUM_HPP
#define TOKENLAB_STABLE_SUM_HPP

namespace tokenlab {

// Kahan compensated accumulator.
class StableSum {
 public:
  StableSum() = default;
  explicit StableSum(double init) : sum_(init) {}

  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }

  StableSum& operator+=(double x) {
    add(x);
    return *this;
  }

  double get() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace tokenlab

#endif  // TOKENLAB_STABLE_SUM_HPP
