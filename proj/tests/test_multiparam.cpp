#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dqc1/dense.hpp"
#include "dqc1/errors.hpp"
#include "dqc1/multiparam.hpp"
#include "oracle.hpp"

using namespace dqc1;

namespace {

PauliProduct P(const char* s) { return PauliProduct::parse(s); }

MultiHamiltonian make(std::initializer_list<std::pair<double, const char*>> terms) {
  MultiHamiltonian h;
  for (const auto& [theta, text] : terms) h.terms.push_back({theta, P(text)});
  return h;
}

}  // namespace

TEST(Decoupler, Examples) {
  // ZZ also decouples here, but the weight-ordered search finds IY first.
  const PauliProduct s = select_decoupler(make({{0.3, "ZI"}, {0.7, "IX"}}), 0);
  EXPECT_EQ(s.weight(), 1u);
  EXPECT_EQ(commutes(s, P("ZI")), PauliRelation::commute);
  EXPECT_EQ(commutes(s, P("IX")), PauliRelation::anticommute);
  EXPECT_EQ(commutes(P("ZZ"), P("ZI")), PauliRelation::commute);
  EXPECT_EQ(commutes(P("ZZ"), P("IX")), PauliRelation::anticommute);
  EXPECT_EQ(select_decoupler(make({{0.3, "ZI"}, {0.7, "XI"}}), 0), P("ZI"));
  EXPECT_TRUE(select_decoupler(make({{0.3, "XY"}}), 0).is_identity());
}

TEST(Decoupler, IsolatesTheSelectedTerm) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "XX"}, {0.5, "XI"}});
  for (std::size_t nu = 0; nu < h.size(); ++nu) {
    const PauliProduct sigma = select_decoupler(h, nu);
    const PauliSum decoupled = decouple_hamiltonian(h.hamiltonian(), sigma);
    ASSERT_EQ(decoupled.size(), 1u);
    EXPECT_EQ(decoupled[0].product, h.terms[nu].sigma);
    EXPECT_DOUBLE_EQ(decoupled[0].coefficient, h.terms[nu].theta);
    const PauliProduct partner = probe_partner(h, nu);
    EXPECT_EQ(commutes(partner, h.terms[nu].sigma), PauliRelation::anticommute);
  }
}

TEST(Decoupler, RejectsInvalidHamiltonians) {
  EXPECT_THROW(make({{0.3, "ZI"}, {0.7, "ZI"}}).validate(), PreconditionError);
  EXPECT_THROW(make({{0.3, "ZI"}, {0.7, "X"}}).validate(), DimensionError);
}

TEST(Gamma, PriorFormula) {
  const GammaPrior zero = gamma_prior(1e-3, 0.0);
  EXPECT_DOUBLE_EQ(zero.inflated_delta, 1e-3);
  const GammaPrior half = gamma_prior(1e-3, 0.5);
  EXPECT_DOUBLE_EQ(half.delta_gamma, 5e-4);
  EXPECT_NEAR(half.inflated_delta, 1.118e-3, 1e-6);
}

TEST(Gamma, BiasBoundedByEpsilonAndVanishesWhenCommuting) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "XX"}, {0.5, "XI"}});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> time(0.2, 20.0);
  for (std::size_t nu = 0; nu < h.size(); ++nu) {
    TrotterPlan plan;
    plan.order = nu == 1 ? 3 : 2;
    plan.slices = 4;
    plan.decoupler = select_decoupler(h, nu);
    const PauliProduct s1 = probe_partner(h, nu);
    for (int i = 0; i < 5; ++i) {
      const TrotterizedMean m = trotterized_measurement_mean(h, nu, plan, s1, time(rng));
      EXPECT_LE(std::abs(m.gamma), m.epsilon + 1e-12);
    }
  }
  const MultiHamiltonian commuting = make({{0.3, "ZI"}, {0.7, "IZ"}});
  TrotterPlan plan;
  plan.decoupler = P("ZI");
  const TrotterizedMean m = trotterized_measurement_mean(commuting, 0, plan, P("XI"), 2.0);
  EXPECT_NEAR(m.gamma, 0.0, 1e-12);
}

TEST(Gamma, ManySlicesConverge) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "XX"}, {0.5, "XI"}});
  TrotterPlan plan;
  plan.order = 3;
  plan.slices = 10000;
  plan.decoupler = select_decoupler(h, 0);
  const TrotterizedMean m = trotterized_measurement_mean(h, 0, plan, probe_partner(h, 0), 0.5);
  EXPECT_LT(std::abs(m.gamma), 1e-8);
}

TEST(Gamma, MeanMatchesExplicitProductFormula) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "XX"}, {0.5, "XI"}});
  TrotterPlan plan;
  plan.order = 2;
  plan.slices = 6;
  plan.decoupler = select_decoupler(h, 2);
  const PauliProduct s1 = probe_partner(h, 2);
  const double t = 1.7;
  const oracle::Matrix mh = to_matrix(h.hamiltonian());
  const oracle::Matrix s = oracle::pauli(plan.decoupler.to_string());
  const oracle::Matrix half = oracle::expm_minus_i(mh, t / 6 / 2);
  const oracle::Matrix step = half * s * half * s;
  oracle::Matrix w = oracle::Matrix::Identity(4, 4);
  for (int i = 0; i < 6; ++i) w = step * w;
  const oracle::Matrix m1 = oracle::pauli(s1.to_string());
  const double expected = (w.adjoint() * m1 * w * m1).trace().real() / 4.0;
  const TrotterizedMean m = trotterized_measurement_mean(h, 2, plan, s1, t);
  EXPECT_NEAR(m.mean, expected, 1e-12);
  EXPECT_NEAR(m.mean - m.gamma, std::cos(2 * 0.5 * t), 1e-12);
}

TEST(Slices, MinimalSlicesIsMinimal) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "XX"}, {0.5, "XI"}});
  const TrotterOracle o(h.hamiltonian(), select_decoupler(h, 0));
  for (int order : {2, 3}) {
    const std::uint64_t q = minimal_slices(o, 1.0, order, 1e-4, 1u << 26);
    EXPECT_LE(2 * o.error(1.0, q, order), 1e-4);
    EXPECT_GT(2 * o.error(1.0, q - 1, order), 1e-4);
  }
}

TEST(Estimate, SingleTermReducesToOneParameter) {
  const MultiHamiltonian h = make({{0.7, "Z"}});
  ZoomPolicy policy;
  policy.target_precision = 1e-5;
  const NoiseModel noise{1e-3, 1, 3};
  int covered = 0;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const auto runs = estimate_all(h, {default_plan(h, 0, 2, 1e-4)}, policy, noise, trial);
    ASSERT_EQ(runs.size(), 1u);
    ASSERT_TRUE(runs[0].converged) << runs[0].error;
    covered += runs[0].covers();
  }
  EXPECT_GE(covered, 26);
}

TEST(Estimate, TwoTermsRecovered) {
  const MultiHamiltonian h = make({{0.3, "ZI"}, {0.7, "IX"}});
  ZoomPolicy policy;
  policy.target_precision = 1e-5;
  const NoiseModel noise{1e-3, 1, 6};
  std::vector<TrotterPlan> plans = {default_plan(h, 0, 2, 1e-4), default_plan(h, 1, 2, 1e-4)};
  int within = 0;
  int total = 0;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    for (const RunRecord& r : estimate_all(h, plans, policy, noise, trial)) {
      ASSERT_TRUE(r.converged) << r.error;
      ++total;
      within += std::abs(r.theta_hat - r.theta_true) <= 1.96 * 1e-5 * (1 + 0.1);
    }
  }
  EXPECT_GE(within, 0.9 * total);
}
