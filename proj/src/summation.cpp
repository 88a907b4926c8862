#include "gsfde/summation.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "gsfde/errors.hpp"

namespace gsfde {

namespace mp = boost::multiprecision;

namespace {

constexpr int kScaleBits = 1074;

// Round the nonnegative integer `q` (plus a sticky bit for a discarded
// nonzero fraction) to the nearest double, ties to even, then scale by
// 2^-kScaleBits.
double round_scaled(const mp::cpp_int& q, bool sticky) {
  if (q == 0) return 0.0;
  const auto top = static_cast<int>(mp::msb(q));
  if (top <= 52) {
    // Subnormal-range magnitude: the fraction below 2^-1074 cannot be
    // represented anyway.
    return std::ldexp(q.convert_to<double>(), -kScaleBits);
  }
  const int shift = top - 52;
  mp::cpp_int mantissa = q >> shift;
  const bool half = mp::bit_test(q, static_cast<unsigned>(shift - 1));
  bool below = sticky;
  if (!below && shift >= 2) {
    const mp::cpp_int mask = (mp::cpp_int(1) << (shift - 1)) - 1;
    below = (q & mask) != 0;
  }
  if (half && (below || mp::bit_test(mantissa, 0))) mantissa += 1;
  const auto m = mantissa.convert_to<std::uint64_t>();
  return std::ldexp(static_cast<double>(m), shift - kScaleBits);
}

double to_double(const mp::cpp_int& total, std::uint64_t divisor) {
  const bool negative = total < 0;
  const mp::cpp_int magnitude = negative ? mp::cpp_int(-total) : total;
  mp::cpp_int q = magnitude;
  bool sticky = false;
  if (divisor != 1) {
    mp::cpp_int r;
    mp::divide_qr(magnitude, mp::cpp_int(divisor), q, r);
    sticky = r != 0;
  }
  const double v = round_scaled(q, sticky);
  return negative ? -v : v;
}

}  // namespace

struct ExactSum::Impl {
  mp::cpp_int total = 0;
};

ExactSum::ExactSum() : impl_(std::make_unique<Impl>()) {}
ExactSum::~ExactSum() = default;
ExactSum::ExactSum(const ExactSum& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
ExactSum& ExactSum::operator=(const ExactSum& other) {
  if (this != &other) *impl_ = *other.impl_;
  return *this;
}
ExactSum::ExactSum(ExactSum&&) noexcept = default;
ExactSum& ExactSum::operator=(ExactSum&&) noexcept = default;

void ExactSum::add(double x) {
  if (!std::isfinite(x)) throw UsageError("ExactSum: non-finite term");
  if (x == 0.0) return;
  int exponent = 0;
  const double fraction = std::frexp(std::abs(x), &exponent);
  // |x| = m * 2^(exponent - 53) with m a 53-bit integer.
  const auto m = static_cast<std::uint64_t>(std::ldexp(fraction, 53));
  const int shift = exponent - 53 + kScaleBits;
  mp::cpp_int term = m;
  if (shift >= 0) {
    term <<= static_cast<unsigned>(shift);
  } else {
    // Subnormal: the low bits of m are zero.
    term >>= static_cast<unsigned>(-shift);
  }
  if (x < 0.0) {
    impl_->total -= term;
  } else {
    impl_->total += term;
  }
}

double ExactSum::value() const { return to_double(impl_->total, 1); }

double ExactSum::mean(std::uint64_t n) const {
  if (n == 0) throw UsageError("ExactSum::mean over zero terms");
  return to_double(impl_->total, n);
}

}  // namespace gsfde
