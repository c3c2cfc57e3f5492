#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace nashfund {
namespace {

using testing::instance;
using testing::throws_kind;

TEST(Mechanisms, NamesRoundTrip) {
  for (MechanismId id : all_mechanisms) EXPECT_EQ(parse_mechanism(to_string(id)), id);
  EXPECT_EQ(to_string(MechanismId::conditional_utilitarian), "conditional_utilitarian");
  EXPECT_TRUE(throws_kind([] { parse_mechanism("leximin"); }, ErrorKind::InvalidValue));
}

TEST(Mechanisms, UtilitarianOnCardinalProfile) {
  const auto d = run_mechanism(MechanismId::utilitarian, fixtures::two_agent_cardinal());
  EXPECT_EQ(d.spend, (std::vector<double>{0, 2}));
  EXPECT_EQ(d.total, 2.0);
}

TEST(Mechanisms, UtilitarianSplitsTies) {
  const auto d = run_mechanism(MechanismId::utilitarian, instance({{1, 0}, {0, 1}}, {1, 1}));
  EXPECT_EQ(d.spend, (std::vector<double>{1, 1}));
}

TEST(Mechanisms, UtilitarianIgnoresNonContributors) {
  // Agent 2's vote for b does not count when agent 2 pays nothing.
  const auto d = run_mechanism(MechanismId::utilitarian, instance({{1, 0}, {0, 1}}, {1, 0}));
  EXPECT_EQ(d.spend, (std::vector<double>{1, 0}));
}

TEST(Mechanisms, AnticutPair) {
  EXPECT_EQ(run_mechanism(MechanismId::anticut, fixtures::anticut_pair(1, 1)).spend,
            (std::vector<double>{1, 1}));
  EXPECT_EQ(run_mechanism(MechanismId::anticut, fixtures::anticut_pair(1, 0)).spend,
            (std::vector<double>{0.5, 0.5}));
}

TEST(Mechanisms, ConditionalUtilitarianAndUniformSplit) {
  // Welfare: a = 2, b = 1. Agent 1 accepts both and goes to a.
  const Instance pair = fixtures::anticut_pair(1, 1);
  EXPECT_EQ(run_mechanism(MechanismId::conditional_utilitarian, pair).spend,
            (std::vector<double>{2, 0}));
  EXPECT_EQ(run_mechanism(MechanismId::uniform_split, pair).spend,
            (std::vector<double>{1.5, 0.5}));
}

TEST(Mechanisms, AppendixC) {
  const Instance inst = fixtures::three_agent_cic_profile();
  EXPECT_EQ(run_mechanism(MechanismId::appendix_c, inst).spend, (std::vector<double>{1, 0, 0, 2}));
  const auto skew = run_mechanism(MechanismId::appendix_c, fixtures::three_agent_cic_profile(1, 0.25, 0.5));
  EXPECT_EQ(skew.spend, (std::vector<double>{0.25, 0.75, 0, 0.75}));
  EXPECT_TRUE(throws_kind([] { run_mechanism(MechanismId::appendix_c, fixtures::two_agent_cardinal()); },
                          ErrorKind::UnsupportedInstance));
}

TEST(Mechanisms, NashFailureBecomesSolverFailure) {
  SolverConfig cfg;
  cfg.max_iters = 1;
  EXPECT_TRUE(throws_kind(
      [&] { run_mechanism(MechanismId::nash, fixtures::irrational_optimum(), cfg); },
      ErrorKind::SolverFailure));
}

TEST(WithContribution, Examples) {
  const Instance t1 = fixtures::two_agent_cardinal();
  const Instance dropped = with_contribution(t1, 1, 0);
  EXPECT_EQ(dropped.agents[0].contribution, 1.0);
  EXPECT_EQ(dropped.agents[1].contribution, 0.0);
  EXPECT_EQ(t1.agents[1].contribution, 1.0);

  EXPECT_EQ(with_contribution(t1, 0, 1.0), t1);

  const Instance half = with_contribution(t1, 0, 0.5);
  EXPECT_EQ(half.agents[0].contribution, 0.5);
  EXPECT_EQ(pool(half), 1.5);

  EXPECT_TRUE(throws_kind([&] { with_contribution(t1, 0, 1.5); },
                          ErrorKind::ContributionExceedsBudget));
}

TEST(Mechanisms, OutputsDistributeThePool) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 300; ++k) {
    Instance inst = random_instance(rng, {});
    if (k % 5 == 0) inst.agents[0].contribution = 0.0;
    for (MechanismId id : all_mechanisms) {
      if (id == MechanismId::appendix_c) continue;
      const auto d = run_mechanism(id, inst);
      EXPECT_NO_THROW(check_distribution(inst, d));
      EXPECT_NEAR(d.total, pool(inst), distribution_tolerance(pool(inst)));
      for (double v : d.spend) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(Mechanisms, PerAgentRulesAreDecomposable) {
  std::mt19937_64 rng(52);
  RandomInstanceConfig cfg;
  cfg.max_agents = 6;
  cfg.max_projects = 5;
  for (int k = 0; k < 300; ++k) {
    const Instance inst = random_instance(rng, cfg);
    for (MechanismId id : {MechanismId::uniform_split, MechanismId::conditional_utilitarian,
                           MechanismId::anticut}) {
      EXPECT_TRUE(check_decomposable(inst, run_mechanism(id, inst)).decomposable)
          << to_string(id) << " on case " << k;
    }
  }
}

TEST(Mechanisms, NashIsEfficient) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 150; ++k) {
    const Instance inst = random_instance(rng, {});
    const auto report = check_efficiency(inst, run_mechanism(MechanismId::nash, inst));
    EXPECT_TRUE(report.holds) << "case " << k;
  }
}

}  // namespace
}  // namespace nashfund
