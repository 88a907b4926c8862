#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gsfde/errors.hpp"
#include "gsfde/summation.hpp"

using namespace gsfde;

TEST(CompensatedSum, RecoversCancelledTerms) {
  CompensatedSum s;
  s.add(1e16);
  s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1.0);
}

TEST(ExactSum, EmptyIsZero) {
  ExactSum s;
  EXPECT_EQ(s.value(), 0.0);
  EXPECT_EQ(s.mean(5), 0.0);
}

TEST(ExactSum, CancellationIsExact) {
  ExactSum s;
  for (double x : {1e300, 1.0, -1e300, 1e-300, 2.5}) s.add(x);
  EXPECT_EQ(s.value(), 3.5);
}

TEST(ExactSum, OrderIndependent) {
  std::mt19937_64 engine(1);
  std::lognormal_distribution<double> dist(0.0, 8.0);
  std::vector<double> xs(2000);
  for (auto& x : xs) x = (engine() & 1 ? 1.0 : -1.0) * dist(engine);
  ExactSum forward;
  for (double x : xs) forward.add(x);
  std::shuffle(xs.begin(), xs.end(), engine);
  ExactSum shuffled;
  for (double x : xs) shuffled.add(x);
  EXPECT_EQ(forward.value(), shuffled.value());
  EXPECT_EQ(forward.mean(2000), shuffled.mean(2000));
}

TEST(ExactSum, MeanOfConstantIsThatConstant) {
  for (double c : {0.7, -3.1e-7, 1.0 / 3.0, 123456.789, 5e-320}) {
    ExactSum s;
    for (int k = 0; k < 999; ++k) s.add(c);
    EXPECT_EQ(s.mean(999), c) << c;
  }
}

TEST(ExactSum, MeanIsCorrectlyRounded) {
  // (1 + 2^-52) + 1 = 2 + 2^-52; halving gives 1 + 2^-53, a tie rounded to even (1).
  ExactSum s;
  s.add(1.0 + std::ldexp(1.0, -52));
  s.add(1.0);
  EXPECT_EQ(s.mean(2), 1.0);
  // 1/3 of 1 is the correctly rounded double 1/3.
  ExactSum t;
  t.add(1.0);
  EXPECT_EQ(t.mean(3), 1.0 / 3.0);
  // Sticky bit: slightly above a tie rounds up.
  ExactSum u;
  u.add(1.0 + std::ldexp(1.0, -52));
  u.add(1.0);
  u.add(std::ldexp(1.0, -100));
  EXPECT_EQ(u.mean(2), 1.0 + std::ldexp(1.0, -52));
}

TEST(ExactSum, HandlesSubnormals) {
  ExactSum s;
  const double tiny = std::numeric_limits<double>::denorm_min();
  s.add(tiny);
  s.add(tiny);
  EXPECT_EQ(s.value(), 2 * tiny);
}

TEST(ExactSum, RejectsNonFinite) {
  ExactSum s;
  EXPECT_THROW(s.add(std::numeric_limits<double>::infinity()), UsageError);
  EXPECT_THROW(s.add(std::nan("")), UsageError);
}

TEST(ExactSum, CopyIsIndependent) {
  ExactSum a;
  a.add(1.0);
  ExactSum b = a;
  b.add(1.0);
  EXPECT_EQ(a.value(), 1.0);
  EXPECT_EQ(b.value(), 2.0);
}
