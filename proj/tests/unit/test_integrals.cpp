#include <gtest/gtest.h>

#include <cmath>

#include "gsfde/errors.hpp"
#include "gsfde/integrals.hpp"

using namespace gsfde;

namespace {

DrivingPath brownian_driver(const TimeGrid& grid, std::uint64_t seed) {
  Scenario s;
  s.volatility = VolatilityControl::constant_at(1.0);
  return generate_driver(grid, s, seed);
}

}  // namespace

TEST(LebesgueIntegral, ZeroAndOne) {
  const TimeGrid grid(1.0, 1000);
  EXPECT_EQ(lebesgue_integral(GridProcess::constant(grid, 0.0), 1000), 0.0);
  EXPECT_EQ(lebesgue_integral(GridProcess::constant(grid, 1.0), 1000), 1.0);
  const TimeGrid odd(1.0, 7);
  EXPECT_EQ(lebesgue_integral(GridProcess::constant(odd, 1.0), 7), 1.0);
}

TEST(LebesgueIntegral, LeftPointTimeIntegral) {
  const TimeGrid grid(1.0, 10000);
  const double v = lebesgue_integral(GridProcess::time(grid), 10000);
  EXPECT_NEAR(v, 0.5, 1e-4);
  // Exact left-point value: (1 - dt)/2.
  EXPECT_NEAR(v, 0.5 * (1.0 - grid.dt()), 1e-13);
}

TEST(ItoIntegral, ZeroAndTelescoping) {
  const TimeGrid grid(1.0, 500);
  const auto d = brownian_driver(grid, 3);
  EXPECT_EQ(ito_integral(GridProcess::constant(grid, 0.0), d.B, 500), 0.0);
  for (std::size_t k : {0u, 1u, 250u, 500u}) {
    EXPECT_NEAR(ito_integral(GridProcess::constant(grid, 1.0), d.B, k), d.B[k], 1e-14);
  }
}

TEST(ItoIntegral, DiscreteItoIdentity) {
  const TimeGrid grid(1.0, 1000);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = brownian_driver(grid, seed);
    const double b = d.B.back();
    const double ito = ito_integral(GridProcess(grid, d.B), d.B, 1000);
    EXPECT_NEAR(ito, 0.5 * (b * b - d.qv.back()), 1e-12 * std::max(1.0, b * b));
  }
}

TEST(QvIntegral, ZeroOneAndMean) {
  const TimeGrid grid(1.0, 1000);
  const auto d = brownian_driver(grid, 4);
  EXPECT_EQ(qv_integral(GridProcess::constant(grid, 0.0), d.qv, 1000), 0.0);
  EXPECT_NEAR(qv_integral(GridProcess::constant(grid, 1.0), d.qv, 1000), d.qv.back(), 1e-14);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto p = brownian_driver(grid, 1000 + s);
    total += qv_integral(GridProcess::constant(grid, 1.0), p.qv, 1000);
  }
  EXPECT_NEAR(total / 1000.0, 1.0, 0.02);
}

TEST(JumpIntegral, Cases) {
  const std::vector<JumpEvent> jumps{{0.1, 0.5}, {0.4, -0.2}, {0.9, 1.0}};
  EXPECT_EQ(jump_integral({}, {}, 1.0), 0.0);
  const std::vector<double> zeros(3, 0.0);
  EXPECT_EQ(jump_integral(zeros, jumps, 1.0), 0.0);
  const std::vector<double> k{0.5, -0.2, 1.0};
  EXPECT_NEAR(jump_integral(k, jumps, 1.0), 1.3, 1e-15);
  EXPECT_NEAR(jump_integral(k, jumps, 0.4), 0.3, 1e-15);
  EXPECT_EQ(jump_integral(k, jumps, 0.05), 0.0);
  EXPECT_THROW(jump_integral(zeros, std::span<const JumpEvent>(jumps).first(2), 1.0), UsageError);
}

TEST(RunningIntegrals, MatchPointwiseIntegrals) {
  const TimeGrid grid(1.0, 200);
  Scenario s;
  s.levy = LevyScenario{5.0, JumpLaw::atoms({{1.0, 0.5}, {-1.0, 0.5}})};
  const auto d = generate_driver(grid, s, 21);
  const GridProcess eta(grid, d.B);
  const auto rl = running_lebesgue(eta);
  const auto ri = running_ito(eta, d.B);
  const auto rq = running_qv(eta, d.qv);
  std::vector<double> k;
  for (const auto& ev : d.jumps) k.push_back(ev.size);
  const auto rj = running_jump(k, d);
  for (std::size_t i = 0; i <= 200; i += 20) {
    EXPECT_NEAR(rl.values[i], lebesgue_integral(eta, i), 1e-14);
    EXPECT_NEAR(ri.values[i], ito_integral(eta, d.B, i), 1e-14);
    EXPECT_NEAR(rq.values[i], qv_integral(eta, d.qv, i), 1e-14);
    EXPECT_NEAR(rj.values[i], jump_integral(k, d.jumps, grid.time(i)), 1e-14);
  }
}

TEST(Integrals, ErrorPaths) {
  const TimeGrid grid(1.0, 10);
  EXPECT_THROW(GridProcess(grid, std::vector<double>(10, 0.0)), UsageError);
  const auto one = GridProcess::constant(grid, 1.0);
  EXPECT_THROW(lebesgue_integral(one, 11), UsageError);
  const std::vector<double> short_b(5, 0.0);
  EXPECT_THROW(ito_integral(one, short_b, 10), UsageError);
  EXPECT_THROW(qv_integral(one, short_b, 10), UsageError);
}
