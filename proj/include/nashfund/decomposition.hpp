#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nashfund/error.hpp"
#include "nashfund/maxflow.hpp"
#include "nashfund/model.hpp"
#include "nashfund/rational.hpp"
#include "nashfund/solver.hpp"

namespace nashfund {

/// A set of agents N' whose acceptable (or favorite) projects receive less
/// than the agents contribute together.
struct SubsetWitness {
  std::vector<std::size_t> agent_subset;
  double covered_spend = 0.0;
  double required = 0.0;
};

struct DecomposabilityVerdict {
  bool decomposable = false;
  std::optional<Decomposition> decomposition;
  std::optional<SubsetWitness> witness;
};

/// Residual KKT error above which the proportional split no longer adds up.
inline constexpr double proportional_split_kkt_limit = 1e-6;

/**
 * Splits a Nash distribution into individual parts: agent i spends
 * C_i * delta(x) * u_i(x) / u_i(delta) on project x. At the optimum the parts
 * add up to delta and each part only funds projects the agent accepts.
 */
inline Decomposition proportional_decomposition(const Instance& instance,
                                                const Distribution& delta) {
  detail::require_pool_total(instance, delta);
  const KktReport kkt = kkt_check(instance, delta);
  if (kkt.max_residual > proportional_split_kkt_limit) {
    throw Error(ErrorKind::NotAtOptimum,
                "KKT residual " + std::to_string(kkt.max_residual) +
                    " is too large for the proportional split");
  }
  Decomposition out;
  const std::size_t m = instance.num_projects();
  for (const auto& agent : instance.agents) {
    Distribution part = Distribution::zero(m);
    part.total = agent.contribution;
    if (agent.contribution > 0.0) {
      const double u = utility_of(agent, delta.spend);
      const double w = agent.contribution / u;
      for (std::size_t x = 0; x < m; ++x) {
        part.spend[x] = w * delta.spend[x] * agent.utilities[x];
      }
    }
    out.parts.push_back(std::move(part));
  }
  return out;
}

namespace detail {

inline bool edge_allowed(const Agent& agent, std::size_t project, bool strong) {
  return strong ? agent.favorite(project) : agent.acceptable(project);
}

inline SubsetWitness make_witness(const Instance& instance, const Distribution& delta,
                                  std::vector<std::size_t> subset, bool strong) {
  SubsetWitness w;
  std::vector<bool> covered(instance.num_projects(), false);
  for (std::size_t i : subset) {
    const Agent& agent = instance.agents[i];
    w.required += agent.contribution;
    for (std::size_t x = 0; x < covered.size(); ++x) {
      if (edge_allowed(agent, x, strong)) covered[x] = true;
    }
  }
  for (std::size_t x = 0; x < covered.size(); ++x) {
    if (covered[x]) w.covered_spend += delta.spend[x];
  }
  w.agent_subset = std::move(subset);
  return w;
}

inline DecomposabilityVerdict check_decomposable_impl(const Instance& instance,
                                                      const Distribution& delta, bool strong) {
  require_pool_total(instance, delta);
  const std::size_t n = instance.num_agents();
  const std::size_t m = instance.num_projects();
  const double c = pool(instance);
  const double tol = distribution_tolerance(c);

  // source, agents, projects, sink
  const std::size_t source = 0;
  const std::size_t sink = 1 + n + m;
  FlowNetwork net(sink + 1, 1e-15 * std::max(1.0, c));
  std::vector<std::vector<std::size_t>> edge_ids(n, std::vector<std::size_t>(m, SIZE_MAX));
  for (std::size_t i = 0; i < n; ++i) {
    const Agent& agent = instance.agents[i];
    net.add_edge(source, 1 + i, agent.contribution);
    for (std::size_t x = 0; x < m; ++x) {
      if (edge_allowed(agent, x, strong)) {
        edge_ids[i][x] = net.add_edge(1 + i, 1 + n + x, FlowNetwork::infinite);
      }
    }
  }
  for (std::size_t x = 0; x < m; ++x) net.add_edge(1 + n + x, sink, delta.spend[x]);

  const double flow = net.max_flow(source, sink);
  DecomposabilityVerdict verdict;
  if (flow >= c - tol) {
    verdict.decomposable = true;
    Decomposition d;
    for (std::size_t i = 0; i < n; ++i) {
      Distribution part = Distribution::zero(m);
      part.total = instance.agents[i].contribution;
      for (std::size_t x = 0; x < m; ++x) {
        if (edge_ids[i][x] != SIZE_MAX) part.spend[x] = net.flow(edge_ids[i][x]);
      }
      d.parts.push_back(std::move(part));
    }
    verdict.decomposition = std::move(d);
    return verdict;
  }

  const auto side = net.reachable_from(source);
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < n; ++i) {
    if (side[1 + i]) subset.push_back(i);
  }
  verdict.witness = make_witness(instance, delta, std::move(subset), strong);
  return verdict;
}

}  // namespace detail

/// Decides whether `delta` splits into parts delta_i of total C_i, each
/// spending only on projects agent i accepts. Solved as a bipartite max-flow;
/// on failure the source side of a minimum cut is a violating agent set.
inline DecomposabilityVerdict check_decomposable(const Instance& instance,
                                                 const Distribution& delta) {
  return detail::check_decomposable_impl(instance, delta, false);
}

/// As check_decomposable, but each part may only fund the agent's favorite
/// (maximum-utility) projects.
inline DecomposabilityVerdict check_strong_decomposable(const Instance& instance,
                                                        const Distribution& delta) {
  return detail::check_decomposable_impl(instance, delta, true);
}

struct OracleVerdict {
  bool decomposable = true;
  std::optional<SubsetWitness> witness;
};

inline constexpr std::size_t oracle_max_agents = 20;

/**
 * Checks the subset inequality sum over the union of A_i (i in N') of
 * delta(x) >= sum over N' of C_i for all 2^n agent subsets, in exact rational
 * arithmetic on rationalized inputs. The same absolute tolerance as the flow
 * check is applied, exactly. Returns the first violating subset in mask order.
 */
inline OracleVerdict brute_force_decomposability_oracle(const Instance& instance,
                                                        const Distribution& delta,
                                                        bool strong) {
  const std::size_t n = instance.num_agents();
  const std::size_t m = instance.num_projects();
  if (n > oracle_max_agents) {
    throw Error(ErrorKind::TooManyAgents,
                std::to_string(n) + " agents exceeds the enumeration limit of " +
                    std::to_string(oracle_max_agents));
  }
  if (m > 64) {
    throw Error(ErrorKind::InvalidValue, "the subset oracle supports at most 64 projects");
  }
  detail::require_pool_total(instance, delta);

  std::vector<Rational> contribution(n), spend(m);
  std::vector<std::uint64_t> allowed(n, 0);
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    contribution[i] = rationalize(instance.agents[i].contribution);
    total += contribution[i];
    for (std::size_t x = 0; x < m; ++x) {
      if (detail::edge_allowed(instance.agents[i], x, strong)) allowed[i] |= 1ULL << x;
    }
  }
  for (std::size_t x = 0; x < m; ++x) spend[x] = rationalize(delta.spend[x]);
  const Rational tol = rationalize(distribution_tolerance(pool(instance)));

  OracleVerdict verdict;
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    std::uint64_t projects = 0;
    Rational required = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        projects |= allowed[i];
        required += contribution[i];
      }
    }
    Rational covered = 0;
    for (std::size_t x = 0; x < m; ++x) {
      if (projects & (1ULL << x)) covered += spend[x];
    }
    if (covered < required - tol) {
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1ULL << i)) subset.push_back(i);
      }
      verdict.decomposable = false;
      verdict.witness = SubsetWitness{std::move(subset), to_double(covered), to_double(required)};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace nashfund
