#pragma once

#include <string>
#include <vector>

#include "nashfund/model.hpp"

namespace nashfund::fixtures {

namespace detail {

inline Instance make(std::vector<std::string> projects,
                     std::vector<std::vector<double>> utilities,
                     std::vector<double> contributions) {
  Instance instance;
  instance.projects = std::move(projects);
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    Agent agent;
    agent.name = std::to_string(i + 1);
    agent.contribution = contributions[i];
    agent.budget = std::max(1.0, contributions[i]);
    agent.utilities = std::move(utilities[i]);
    instance.agents.push_back(std::move(agent));
  }
  return validate_and_normalize(instance);
}

}  // namespace detail

/// Two agents, u1 = (1, 0), u2 = (1, 3), C = (1, 1). Nash: 1.5 a + 0.5 b.
inline Instance two_agent_cardinal() {
  return detail::make({"a", "b"}, {{1, 0}, {1, 3}}, {1, 1});
}

/// Approval sets {a,b}, {a,c}, {b,c}, {c}, C = (1,1,1,1). Irrational optimum.
inline Instance irrational_optimum() {
  return detail::make({"a", "b", "c"}, {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 1}},
                      {1, 1, 1, 1});
}

/// Approval sets {a,c}, {a,d}, {b,c}, {b,d}: every convex combination of
/// 2a + 2b and 2c + 2d is optimal.
inline Instance tied_optimum() {
  return detail::make({"a", "b", "c", "d"},
                      {{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}}, {1, 1, 1, 1});
}

/// Pet projects a, b worth 1 + eps, shared compromise x worth 1.
inline Instance pet_projects(double eps = 0.5) {
  return detail::make({"a", "b", "x"}, {{1 + eps, 0, 1}, {0, 1 + eps, 1}}, {1, 1});
}

/// Three pet projects worth 2 - eps and a compromise x worth 1.
inline Instance three_pet_projects(double eps = 0.25) {
  return detail::make({"a", "b", "c", "x"},
                      {{2 - eps, 0, 0, 1}, {0, 2 - eps, 0, 1}, {0, 0, 2 - eps, 1}}, {1, 1, 1});
}

/// u1 = 1_{a,b}, u2 = 1_{a}, B = (1, 1).
inline Instance anticut_pair(double c1 = 1.0, double c2 = 1.0) {
  return detail::make({"a", "b"}, {{1, 1}, {1, 0}}, {c1, c2});
}

/// u1 = 1_{a,b}, u2 = 1_{a,c}, u3 = 1_{d}, B = (1, 1, 1).
inline Instance three_agent_cic_profile(double c1 = 1.0, double c2 = 1.0, double c3 = 1.0) {
  return detail::make({"a", "b", "c", "d"}, {{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}},
                      {c1, c2, c3});
}

}  // namespace nashfund::fixtures
