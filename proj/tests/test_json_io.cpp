#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace nashfund {
namespace {

using testing::throws_kind;

const json cardinal = json::parse(R"({
  "projects": ["a", "b"],
  "agents": [
    {"name": "1", "budget": 1.0, "contribution": 1.0, "utilities": {"a": 1.0, "b": 0.0}},
    {"name": "2", "budget": 1.0, "contribution": 1.0, "utilities": {"a": 1.0, "b": 3.0}}
  ]
})");

TEST(InstanceJson, Parses) {
  const Instance inst = validate_and_normalize(instance_from_json(cardinal));
  EXPECT_EQ(inst.projects, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(inst.agents[1].utilities, (std::vector<double>{1, 3}));
  EXPECT_EQ(inst.agents[1].name, "2");
}

TEST(InstanceJson, RoundTripsRandomInstances) {
  std::mt19937_64 rng(71);
  for (int k = 0; k < 200; ++k) {
    const Instance inst = instance_from_json(to_json(random_instance(rng, {})));
    const json text = json::parse(to_json(inst).dump());
    EXPECT_EQ(instance_from_json(text), inst);
  }
}

TEST(InstanceJson, Errors) {
  json missing = cardinal;
  missing["agents"][0]["utilities"].erase("b");
  EXPECT_TRUE(throws_kind([&] { instance_from_json(missing); }, ErrorKind::ProjectMismatch));

  json unknown = cardinal;
  unknown["agents"][0]["utilities"]["z"] = 1.0;
  EXPECT_TRUE(throws_kind([&] { instance_from_json(unknown); }, ErrorKind::ProjectMismatch));

  json wrong_type = cardinal;
  wrong_type["agents"][0]["budget"] = "lots";
  EXPECT_TRUE(throws_kind([&] { instance_from_json(wrong_type); }, ErrorKind::InvalidValue));

  json no_agents = cardinal;
  no_agents.erase("agents");
  EXPECT_TRUE(throws_kind([&] { instance_from_json(no_agents); }, ErrorKind::InvalidValue));
}

TEST(DistributionJson, ParsesAndFillsMissingProjects) {
  const Instance inst = instance_from_json(cardinal);
  const auto d = distribution_from_json(inst, json::parse(R"({"spend": {"b": 2.0}})"));
  EXPECT_EQ(d.spend, (std::vector<double>{0, 2}));
  EXPECT_EQ(d.total, 2.0);
  EXPECT_TRUE(throws_kind(
      [&] { distribution_from_json(inst, json::parse(R"({"total": 3, "spend": {"b": 2.0}})")); },
      ErrorKind::InvalidValue));
  EXPECT_TRUE(throws_kind(
      [&] { distribution_from_json(inst, json::parse(R"({"spend": {"q": 2.0}})")); },
      ErrorKind::ProjectMismatch));
}

TEST(DistributionJson, DoublesSurviveTheRoundTrip) {
  const Instance inst = fixtures::irrational_optimum();
  const auto d = solve_nash(inst).distribution;
  const auto back = distribution_from_json(inst, json::parse(to_json(inst, d).dump()));
  EXPECT_EQ(back.spend, d.spend);
}

TEST(ReportJson, Shape) {
  const Instance t1 = fixtures::two_agent_cardinal();
  const json j = to_json(t1, check_decomposability(t1, Distribution::from_spend({0, 2})));
  EXPECT_EQ(j["axiom"], "decomposability");
  EXPECT_EQ(j["verdict"], "violated");
  EXPECT_EQ(j["witness"]["agents"], json::array({"1"}));
  EXPECT_EQ(j["witness"]["covered_spend"], 0.0);
  EXPECT_EQ(j["witness"]["required"], 1.0);
  EXPECT_EQ(j["tested_points"], 1);
  EXPECT_TRUE(j.contains("tolerance"));

  const json cic = to_json(t1, check_cic(MechanismId::utilitarian, t1, 0));
  EXPECT_EQ(cic["witness"]["agent"], "1");
  EXPECT_EQ(cic["samples"].size(), 21u);

  const json parts = to_json(t1, proportional_decomposition(t1, Distribution::from_spend({1.5, 0.5})));
  EXPECT_NEAR(parts["parts"]["2"]["spend"]["b"].get<double>(), 0.5, 1e-12);
}

TEST(TraceCsv, HeaderAndPrecision) {
  const std::string csv = trace_to_csv({{0, 1.0 / 3.0, 0.25, 0.0}});
  EXPECT_EQ(csv, "iter,log_nash,gap_bound,step_l1\n0,0.33333333333333331,0.25,0\n");
}

}  // namespace
}  // namespace nashfund
