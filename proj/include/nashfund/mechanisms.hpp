#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nashfund/error.hpp"
#include "nashfund/model.hpp"
#include "nashfund/solver.hpp"

namespace nashfund {

enum class MechanismId {
  nash,
  utilitarian,
  uniform_split,
  conditional_utilitarian,
  anticut,
  appendix_c,
};

inline constexpr std::array<MechanismId, 6> all_mechanisms = {
    MechanismId::nash,          MechanismId::utilitarian,
    MechanismId::uniform_split, MechanismId::conditional_utilitarian,
    MechanismId::anticut,       MechanismId::appendix_c,
};

constexpr std::string_view to_string(MechanismId id) {
  switch (id) {
    case MechanismId::nash: return "nash";
    case MechanismId::utilitarian: return "utilitarian";
    case MechanismId::uniform_split: return "uniform_split";
    case MechanismId::conditional_utilitarian: return "conditional_utilitarian";
    case MechanismId::anticut: return "anticut";
    case MechanismId::appendix_c: return "appendix_c";
  }
  return "";
}

inline MechanismId parse_mechanism(std::string_view name) {
  for (MechanismId id : all_mechanisms) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::InvalidValue, "unknown mechanism '" + std::string(name) + "'");
}

/// Returns the instance with agent `agent`'s contribution replaced.
inline Instance with_contribution(const Instance& instance, std::size_t agent,
                                  double new_contribution) {
  if (agent >= instance.num_agents()) {
    throw Error(ErrorKind::InvalidValue, "agent index out of range");
  }
  const Agent& a = instance.agents[agent];
  if (!std::isfinite(new_contribution) || new_contribution < 0.0) {
    throw Error(ErrorKind::InvalidValue, "contribution must be finite and nonnegative");
  }
  if (new_contribution > a.budget) {
    throw Error(ErrorKind::ContributionExceedsBudget,
                "agent '" + a.name + "' cannot contribute " +
                    std::to_string(new_contribution) + " above budget " +
                    std::to_string(a.budget));
  }
  Instance out = instance;
  out.agents[agent].contribution = new_contribution;
  return out;
}

namespace detail {

/// Unweighted welfare sum_i u_i(x) over contributing agents.
inline std::vector<double> contributor_welfare(const Instance& instance) {
  std::vector<double> w(instance.num_projects(), 0.0);
  for (const auto& agent : instance.agents) {
    if (agent.contribution <= 0.0) continue;
    for (std::size_t x = 0; x < w.size(); ++x) w[x] += agent.utilities[x];
  }
  return w;
}

inline bool ties(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Adds `amount` uniformly over the projects in `chosen`.
inline void spread(std::vector<double>& spend, const std::vector<std::size_t>& chosen,
                   double amount) {
  for (std::size_t x : chosen) spend[x] += amount / static_cast<double>(chosen.size());
}

/// Acceptable projects of `agent` whose welfare is extremal (max or min).
inline std::vector<std::size_t> extremal_acceptable(const Agent& agent,
                                                    const std::vector<double>& welfare,
                                                    bool maximize) {
  std::optional<double> best;
  for (std::size_t x = 0; x < welfare.size(); ++x) {
    if (!agent.acceptable(x)) continue;
    if (!best || (maximize ? welfare[x] > *best : welfare[x] < *best)) best = welfare[x];
  }
  std::vector<std::size_t> chosen;
  for (std::size_t x = 0; x < welfare.size(); ++x) {
    if (agent.acceptable(x) && ties(welfare[x], *best)) chosen.push_back(x);
  }
  return chosen;
}

inline Distribution run_utilitarian(const Instance& instance) {
  const auto w = contributor_welfare(instance);
  const double c = pool(instance);
  Distribution out = Distribution::zero(instance.num_projects());
  if (c <= 0.0) return out;
  const double best = *std::max_element(w.begin(), w.end());
  std::vector<std::size_t> chosen;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (ties(w[x], best)) chosen.push_back(x);
  }
  spread(out.spend, chosen, c);
  out.total = c;
  return out;
}

inline Distribution run_per_agent(const Instance& instance,
                                  std::vector<std::size_t> (*choose)(const Agent&,
                                                                     const std::vector<double>&)) {
  const auto w = contributor_welfare(instance);
  Distribution out = Distribution::zero(instance.num_projects());
  for (const auto& agent : instance.agents) {
    if (agent.contribution <= 0.0) continue;
    spread(out.spend, choose(agent, w), agent.contribution);
  }
  out.total = pool(instance);
  return out;
}

inline bool is_appendix_c_profile(const Instance& instance) {
  static const std::vector<std::string> projects = {"a", "b", "c", "d"};
  static const std::vector<std::vector<double>> utilities = {
      {1, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 1}};
  if (instance.projects != projects || instance.num_agents() != 3) return false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (instance.agents[i].utilities != utilities[i]) return false;
  }
  return true;
}

/// min(C1,C2) a + (C1 - min) b + (C2 - min) c + (min + C3) d.
inline Distribution run_appendix_c(const Instance& instance) {
  if (!is_appendix_c_profile(instance)) {
    throw Error(ErrorKind::UnsupportedInstance,
                "appendix_c needs three agents approving {a,b}, {a,c}, {d} over projects a,b,c,d");
  }
  const double c1 = instance.agents[0].contribution;
  const double c2 = instance.agents[1].contribution;
  const double c3 = instance.agents[2].contribution;
  const double low = std::min(c1, c2);
  return Distribution::from_spend({low, c1 - low, c2 - low, low + c3});
}

}  // namespace detail

/// Runs a reference mechanism on a validated, normalized instance. The result
/// always distributes exactly the pool.
inline Distribution run_mechanism(MechanismId id, const Instance& instance,
                                  const SolverConfig& solver = {}) {
  switch (id) {
    case MechanismId::nash:
      try {
        return solve_nash(instance, solver).distribution;
      } catch (const MaxItersExceeded& e) {
        throw Error(ErrorKind::SolverFailure, e.what());
      }
    case MechanismId::utilitarian:
      return detail::run_utilitarian(instance);
    case MechanismId::uniform_split:
      return detail::run_per_agent(instance, [](const Agent& agent, const std::vector<double>& w) {
        std::vector<std::size_t> chosen;
        for (std::size_t x = 0; x < w.size(); ++x) {
          if (agent.acceptable(x)) chosen.push_back(x);
        }
        return chosen;
      });
    case MechanismId::conditional_utilitarian:
      return detail::run_per_agent(instance, [](const Agent& agent, const std::vector<double>& w) {
        return detail::extremal_acceptable(agent, w, true);
      });
    case MechanismId::anticut:
      return detail::run_per_agent(instance, [](const Agent& agent, const std::vector<double>& w) {
        return detail::extremal_acceptable(agent, w, false);
      });
    case MechanismId::appendix_c:
      return detail::run_appendix_c(instance);
  }
  throw Error(ErrorKind::InvalidValue, "unknown mechanism");
}

}  // namespace nashfund
