#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>

namespace gsfde {

/// Neumaier compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Exact accumulator for finite doubles: the running total is held as an
/// integer multiple of 2^-1074, so the result is independent of the order in
/// which terms are added.
class ExactSum {
 public:
  ExactSum();
  ~ExactSum();
  ExactSum(const ExactSum& other);
  ExactSum& operator=(const ExactSum& other);
  ExactSum(ExactSum&&) noexcept;
  ExactSum& operator=(ExactSum&&) noexcept;

  /// Throws UsageError on a non-finite term.
  void add(double x);

  /// Correctly rounded total.
  double value() const;

  /// Correctly rounded total / n.
  double mean(std::uint64_t n) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gsfde
