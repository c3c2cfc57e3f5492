#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nashfund/model.hpp"

namespace nashfund {

/// Bounds for seeded random instances used by the property suites.
struct RandomInstanceConfig {
  std::size_t min_agents = 1;
  std::size_t max_agents = 5;
  std::size_t min_projects = 1;
  std::size_t max_projects = 4;
  // Probability that a given agent is dichotomous (approval-style).
  double dichotomous_share = 0.5;
  double min_contribution = 0.05;
  double max_contribution = 1.0;
  // Budgets are drawn in [contribution, contribution * budget_headroom].
  double budget_headroom = 2.0;
};

inline std::string project_name(std::size_t x) {
  std::string name;
  do {
    name.insert(name.begin(), static_cast<char>('a' + x % 26));
    x /= 26;
  } while (x-- > 0);
  return name;
}

/// Approval-style or cardinal utilities for one agent; never all zero.
inline std::vector<double> random_utilities(std::mt19937_64& rng, std::size_t m,
                                            bool dichotomous) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> level(1, 4);
  std::vector<double> u(m, 0.0);
  for (auto& v : u) {
    if (coin(rng) < 0.5) continue;
    v = dichotomous ? 1.0 : (coin(rng) < 0.5 ? static_cast<double>(level(rng))
                                              : 1.0 + 3.0 * coin(rng));
  }
  if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    u[pick(rng)] = 1.0;
  }
  return u;
}

/// Normalized random instance; every agent contributes a positive amount.
inline Instance random_instance(std::mt19937_64& rng, const RandomInstanceConfig& config) {
  std::uniform_int_distribution<std::size_t> agents(config.min_agents, config.max_agents);
  std::uniform_int_distribution<std::size_t> projects(config.min_projects, config.max_projects);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> contribution(config.min_contribution,
                                                      config.max_contribution);
  std::uniform_real_distribution<double> headroom(1.0, config.budget_headroom);

  Instance instance;
  const std::size_t m = projects(rng);
  const std::size_t n = agents(rng);
  for (std::size_t x = 0; x < m; ++x) instance.projects.push_back(project_name(x));
  for (std::size_t i = 0; i < n; ++i) {
    Agent agent;
    agent.name = std::to_string(i + 1);
    agent.contribution = contribution(rng);
    agent.budget = agent.contribution * headroom(rng);
    agent.utilities = random_utilities(rng, m, coin(rng) < config.dichotomous_share);
    instance.agents.push_back(std::move(agent));
  }
  return validate_and_normalize(instance);
}

inline Instance random_instance(std::uint64_t seed, const RandomInstanceConfig& config) {
  std::mt19937_64 rng(seed);
  return random_instance(rng, config);
}

/// Random distribution of `total`, a Dirichlet(1, ..., 1) draw scaled up.
inline Distribution random_distribution(std::mt19937_64& rng, std::size_t m, double total) {
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> spend(m);
  double sum = 0.0;
  for (auto& v : spend) sum += (v = draw(rng));
  for (auto& v : spend) v *= total / sum;
  return {total, std::move(spend)};
}

}  // namespace nashfund
