#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "nashfund/error.hpp"

namespace nashfund {

/// Absolute tolerance for "sums to total" checks on a distribution of the
/// given total. Every module uses this one constant.
inline double distribution_tolerance(double total) {
  return 1e-9 * std::max(1.0, total);
}

/// An agent: budget B, contribution C with 0 <= C <= B, and a utility per unit
/// of money for every project, stored in the instance's project order.
struct Agent {
  std::string name;
  double budget = 0.0;
  double contribution = 0.0;
  std::vector<double> utilities;
  // Values as given before normalization; empty until normalized.
  std::vector<double> raw_utilities;

  bool acceptable(std::size_t project) const {
    return utilities[project] > 0.0;
  }

  double max_utility() const {
    return *std::max_element(utilities.begin(), utilities.end());
  }

  /// Projects attaining the maximum utility, up to a relative 1e-12.
  bool favorite(std::size_t project) const {
    const double top = max_utility();
    return utilities[project] >= top - 1e-12 * top;
  }

  bool operator==(const Agent&) const = default;
};

struct Instance {
  std::vector<std::string> projects;
  std::vector<Agent> agents;

  std::size_t num_projects() const { return projects.size(); }
  std::size_t num_agents() const { return agents.size(); }

  bool operator==(const Instance&) const = default;
};

/// Nonnegative spend per project, in the owning instance's project order.
struct Distribution {
  double total = 0.0;
  std::vector<double> spend;

  static Distribution zero(std::size_t num_projects) {
    return {0.0, std::vector<double>(num_projects, 0.0)};
  }

  static Distribution from_spend(std::vector<double> spend) {
    const double total = std::accumulate(spend.begin(), spend.end(), 0.0);
    return {total, std::move(spend)};
  }

  bool operator==(const Distribution&) const = default;
};

/// Per-agent parts; parts[i] is agent i's individual distribution.
struct Decomposition {
  std::vector<Distribution> parts;
};

inline double pool(const Instance& instance) {
  double sum = 0.0;
  for (const auto& agent : instance.agents) sum += agent.contribution;
  return sum;
}

/// Throws unless `delta` is a well-formed distribution over the instance's
/// projects: right length, nonnegative, spend summing to its total.
inline void check_distribution(const Instance& instance, const Distribution& delta) {
  if (delta.spend.size() != instance.num_projects()) {
    throw Error(ErrorKind::ProjectMismatch,
                "distribution has " + std::to_string(delta.spend.size()) +
                    " entries, instance has " +
                    std::to_string(instance.num_projects()) + " projects");
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < delta.spend.size(); ++x) {
    const double v = delta.spend[x];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidValue,
                  "spend on project '" + instance.projects[x] +
                      "' must be finite and nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - delta.total) > distribution_tolerance(delta.total)) {
    throw Error(ErrorKind::InvalidValue,
                "spend sums to " + std::to_string(sum) + " but total is " +
                    std::to_string(delta.total));
  }
}

/// Structural checks only; utilities are left as given.
inline void validate(const Instance& raw) {
  if (raw.projects.empty()) {
    throw Error(ErrorKind::EmptyInstance, "instance has no projects");
  }
  if (raw.agents.empty()) {
    throw Error(ErrorKind::EmptyInstance, "instance has no agents");
  }
  std::unordered_set<std::string> seen;
  for (const auto& project : raw.projects) {
    if (project.empty()) {
      throw Error(ErrorKind::InvalidValue, "project identifier is empty");
    }
    if (!seen.insert(project).second) {
      throw Error(ErrorKind::DuplicateProject, "project '" + project + "' listed twice");
    }
  }
  for (const auto& agent : raw.agents) {
    const std::string who = "agent '" + agent.name + "'";
    if (!std::isfinite(agent.budget) || agent.budget < 0.0) {
      throw Error(ErrorKind::InvalidValue, who + " has an invalid budget");
    }
    if (!std::isfinite(agent.contribution) || agent.contribution < 0.0) {
      throw Error(ErrorKind::InvalidValue, who + " has an invalid contribution");
    }
    if (agent.contribution > agent.budget) {
      throw Error(ErrorKind::ContributionExceedsBudget,
                  who + " contributes " + std::to_string(agent.contribution) +
                      " above budget " + std::to_string(agent.budget));
    }
    if (agent.utilities.size() != raw.num_projects()) {
      throw Error(ErrorKind::ProjectMismatch,
                  who + " must give a utility for every project");
    }
    for (std::size_t x = 0; x < agent.utilities.size(); ++x) {
      const double u = agent.utilities[x];
      if (std::isnan(u) || u < 0.0) {
        throw Error(ErrorKind::NegativeUtility,
                    who + " has utility " + std::to_string(u) + " for project '" +
                        raw.projects[x] + "'");
      }
      if (!std::isfinite(u)) {
        throw Error(ErrorKind::InvalidValue,
                    who + " has a non-finite utility for project '" +
                        raw.projects[x] + "'");
      }
    }
  }
}

/**
 * Validates the instance and rescales each agent so that its least-preferred
 * acceptable project has utility exactly 1. An agent whose utilities are all
 * equal (including all zero) is treated as finding every project acceptable,
 * with utility 1 everywhere. The values as given are kept in raw_utilities.
 *
 * Idempotent: an already-normalized instance comes back unchanged.
 */
inline Instance validate_and_normalize(const Instance& raw) {
  validate(raw);
  Instance out = raw;
  for (auto& agent : out.agents) {
    if (agent.raw_utilities.empty()) agent.raw_utilities = agent.utilities;
    auto& u = agent.utilities;
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    if (*lo == *hi) {
      std::fill(u.begin(), u.end(), 1.0);
      continue;
    }
    double min_positive = std::numeric_limits<double>::infinity();
    for (double v : u) {
      if (v > 0.0) min_positive = std::min(min_positive, v);
    }
    if (min_positive != 1.0) {
      for (double& v : u) v /= min_positive;
    }
  }
  return out;
}

inline bool is_dichotomous(const Agent& agent) {
  return std::all_of(agent.utilities.begin(), agent.utilities.end(),
                     [](double v) { return v == 0.0 || v == 1.0; });
}

inline bool is_dichotomous(const Instance& instance) {
  return std::all_of(instance.agents.begin(), instance.agents.end(),
                     [](const Agent& a) { return is_dichotomous(a); });
}

/// u_i(delta) = sum_x delta(x) * u_i(x).
inline double utility_of(const Agent& agent, std::span<const double> spend) {
  double u = 0.0;
  for (std::size_t x = 0; x < spend.size(); ++x) u += spend[x] * agent.utilities[x];
  return u;
}

inline double utility_of(const Instance& instance, std::size_t agent,
                         const Distribution& delta) {
  if (delta.spend.size() != instance.num_projects()) {
    throw Error(ErrorKind::ProjectMismatch, "distribution does not match instance projects");
  }
  if (agent >= instance.num_agents()) {
    throw Error(ErrorKind::InvalidValue, "agent index out of range");
  }
  return utility_of(instance.agents[agent], delta.spend);
}

inline std::vector<double> utilities_of(const Instance& instance, const Distribution& delta) {
  std::vector<double> out(instance.num_agents());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = utility_of(instance, i, delta);
  return out;
}

/// F(delta) = sum_i C_i log u_i(delta) over agents with C_i > 0; -inf if one of
/// them gets nothing.
inline double log_nash_objective(const Instance& instance, const Distribution& delta) {
  if (delta.spend.size() != instance.num_projects()) {
    throw Error(ErrorKind::ProjectMismatch, "distribution does not match instance projects");
  }
  double value = 0.0;
  for (const auto& agent : instance.agents) {
    if (agent.contribution <= 0.0) continue;
    const double u = utility_of(agent, delta.spend);
    if (u <= 0.0) return -std::numeric_limits<double>::infinity();
    value += agent.contribution * std::log(u);
  }
  return value;
}

/// Copy of the instance with only the agents that contribute.
inline Instance contributing_only(const Instance& instance) {
  Instance out;
  out.projects = instance.projects;
  for (const auto& agent : instance.agents) {
    if (agent.contribution > 0.0) out.agents.push_back(agent);
  }
  return out;
}

inline std::size_t project_index(const Instance& instance, const std::string& name) {
  const auto it = std::find(instance.projects.begin(), instance.projects.end(), name);
  if (it == instance.projects.end()) {
    throw Error(ErrorKind::ProjectMismatch, "unknown project '" + name + "'");
  }
  return static_cast<std::size_t>(it - instance.projects.begin());
}

}  // namespace nashfund
