#pragma once

namespace fracpq {

/// Kahan compensated accumulator. Used for the pairwise kernel sums so that
/// results are reproducible and stable independent of problem size.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace fracpq
