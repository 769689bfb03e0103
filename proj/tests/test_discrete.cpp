#include <gtest/gtest.h>

#include <cmath>

#include "dqc1/blackbox_discrete.hpp"
#include "dqc1/dense.hpp"
#include "dqc1/errors.hpp"
#include "oracle.hpp"

using namespace dqc1;

namespace {

PauliSum S(const char* s) { return PauliSum::parse(s); }

BlackBoxPolicy policy(double target = 1e-6) {
  BlackBoxPolicy p;
  p.b = 8;
  p.delta = 1e-3;
  p.c = 10.0;
  p.target_precision = target;
  return p;
}

}  // namespace

TEST(Discrete, InitialCompensation) {
  const DiscreteState s = init_discrete(M_PI / 8, policy());
  ASSERT_TRUE(s.pending.has_value());
  EXPECT_EQ(s.pending->q, 1u);
  EXPECT_NEAR(s.pending->phase_comp, M_PI / 8, 1e-15);
  EXPECT_NEAR(init_discrete(M_PI / 4 - 1e-9, policy()).pending->phase_comp, 1e-9, 1e-15);
  EXPECT_THROW(init_discrete(0.0, policy()), PreconditionError);
  EXPECT_THROW(init_discrete(M_PI / 4, policy()), PreconditionError);
}

TEST(Discrete, UpdateShrinksByBPrime) {
  const BlackBoxPolicy p = policy();
  const DiscreteState s0 = init_discrete(0.3, p);
  const DiscreteState s1 = discrete_update(s0, 0.0, p);
  EXPECT_NEAR(s1.theta_hat, 0.3, 1e-15);
  EXPECT_NEAR(s1.sigma, 10e-3 / std::sqrt(101.0), 1e-15);

  // A step whose prior std is b·Σ shrinks by b/√(1+b²).
  DiscreteState s = s1;
  s.sigma = 1e-3;
  s.pending = next_power(s, p);
  EXPECT_NEAR(s.pending->prior_dev, 8e-3, 1e-15);
  const DiscreteState s2 = discrete_update(s, 0.0, p);
  EXPECT_NEAR(s2.sigma, 8e-3 / std::sqrt(65.0), 1e-15);
  EXPECT_NEAR(s2.sigma / 1e-3, 0.9923, 1e-4);
}

TEST(Discrete, CompensatedPowerSolvesWindingEquation) {
  for (double theta : {0.05, 0.3, 0.77}) {
    for (std::uint64_t q : {1u, 8u, 64u, 4096u}) {
      const PowerStep s = compensated_power(theta, q);
      EXPECT_GT(s.phase_comp, -M_PI / 2);
      EXPECT_LE(s.phase_comp, M_PI / 2);
      EXPECT_NEAR(2 * theta * q + 2 * s.phase_comp, M_PI / 2 + 2 * M_PI * s.winding, 1e-9);
    }
  }
}

TEST(Discrete, GeometricCalls) {
  EXPECT_EQ(geometric_calls(8, 1), 1u);
  EXPECT_EQ(geometric_calls(8, 4), 585u);
  EXPECT_EQ(geometric_calls(2, 10), 1023u);
}

TEST(Discrete, StoppingRuleGivesFourSteps) {
  const NoiseModel noise{1e-3, 1, 2};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const RunRecord r = run_discrete(S("Z"), S("X"), S("Y"), 0.2, policy(), noise, trial);
    ASSERT_TRUE(r.converged) << r.error;
    EXPECT_EQ(r.steps.size(), 4u);
    EXPECT_EQ(r.total_calls, geometric_calls(8, 4));
  }
}

TEST(Discrete, BlackBoxSignalMatchesDensePowers) {
  const NoiseModel noise{1e-12, 1, 0};
  const BlackBoxSignal signal(Su2Probe(S("Z"), S("X"), S("Y")), 0.2, noise);
  for (std::uint64_t q : {1u, 3u, 17u}) {
    const oracle::Matrix w = oracle::expm_minus_i(oracle::pauli("Z"), 0.2 * q + 0.1);
    const oracle::Matrix x = oracle::pauli("X");
    const double expected = (w.adjoint() * x * w * x).trace().real() / 2.0;
    SampleStream stream(StreamKey{0, 0, q});
    EXPECT_NEAR(signal.cosine(q, 0.1, stream, nullptr), expected, 1e-9);
    EXPECT_NEAR(expected, std::cos(2 * 0.2 * q + 0.2), 1e-12);
  }
}

TEST(Discrete, UncompensatedScheduleKeepsSlope) {
  BlackBoxPolicy p = policy();
  p.compensate = false;
  DiscreteState s;
  s.q = 8;
  s.theta_hat = 0.3;
  s.sigma = 1e-3;
  const PowerStep step = next_power_uncompensated(s, p);
  EXPECT_EQ(step.phase_comp, 0.0);
  EXPECT_GE(step.q, 32u);
  EXPECT_LE(step.q, 64u);
  for (std::uint64_t q = 32; q <= 64; ++q) {
    EXPECT_GE(std::abs(std::sin(0.6 * step.q)) + 1e-15, std::abs(std::sin(0.6 * q)));
  }
}

TEST(Discrete, CalibrationOnSmallSample) {
  const NoiseModel noise{1e-3, 1, 8};
  int covered = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const RunRecord r = run_discrete(S("Z"), S("X"), S("Y"), 0.2, policy(1e-7), noise, trial);
    ASSERT_TRUE(r.converged) << r.error;
    covered += r.covers();
  }
  EXPECT_GE(covered, 88);
}
