#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nashfund/decomposition.hpp"
#include "nashfund/error.hpp"
#include "nashfund/mechanisms.hpp"
#include "nashfund/model.hpp"
#include "nashfund/rational.hpp"
#include "nashfund/simplex.hpp"
#include "nashfund/solver.hpp"

namespace nashfund {

struct EfficiencyWitness {
  Distribution dominating;
  std::vector<double> utilities_before;
  std::vector<double> utilities_after;
  double total_gain = 0.0;
};

/// Agent `agent` is better off (net of what it pays) contributing `deviation`
/// instead of `contribution`: lhs > rhs + tolerance.
struct CicWitness {
  std::size_t agent = 0;
  double contribution = 0.0;
  double deviation = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct CoreWitness {
  std::vector<std::size_t> group;
  double spend = 0.0;
  double required = 0.0;
};

using Witness =
    std::variant<std::monostate, EfficiencyWitness, CicWitness, CoreWitness, SubsetWitness>;

/// One grid point of a contribution sweep for a single agent.
struct ContributionSample {
  double contribution = 0.0;
  double utility = 0.0;
  double net = 0.0;
};

struct ConjecturePoint {
  double epsilon = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

struct AxiomReport {
  std::string axiom;
  bool holds = true;
  Witness witness;
  std::size_t tested_points = 0;
  double tolerance = 0.0;
  std::vector<ContributionSample> samples;
  std::vector<ConjecturePoint> conjecture;
};

inline constexpr double default_axiom_tolerance = 1e-7;
inline constexpr std::size_t default_grid_size = 21;
// Above this many LP rows plus columns the efficiency LP runs in doubles.
inline constexpr std::size_t exact_lp_limit = 30;

namespace detail {

inline void require_agent(const Instance& instance, std::size_t agent) {
  if (agent >= instance.num_agents()) {
    throw Error(ErrorKind::InvalidValue, "agent index " + std::to_string(agent) + " out of range");
  }
}

template <class T, class Convert>
LpSolution<T> efficiency_lp(const Instance& instance, const Distribution& delta,
                            const std::vector<std::size_t>& active, Convert convert,
                            const T& eps) {
  const std::size_t m = instance.num_projects();
  LinearProgram<T> lp;
  lp.objective.assign(m, T(0));
  std::vector<T> spend(m);
  T total(0);
  for (std::size_t x = 0; x < m; ++x) {
    spend[x] = convert(delta.spend[x]);
    total += spend[x];
  }
  lp.add_constraint(std::vector<T>(m, T(1)), Relation::equal, total);
  for (std::size_t i : active) {
    std::vector<T> row(m);
    T baseline(0);
    for (std::size_t x = 0; x < m; ++x) {
      row[x] = convert(instance.agents[i].utilities[x]);
      baseline += row[x] * spend[x];
      lp.objective[x] += row[x];
    }
    lp.add_constraint(std::move(row), Relation::greater_equal, baseline);
  }
  return solve_lp(lp, eps);
}

}  // namespace detail

/**
 * Looks for a distribution of the same total that weakly improves every
 * contributing agent. Solves
 *   max sum_i u_i(d') - u_i(delta)  s.t.  d' >= 0, sum d' = |C|, u_i(d') >= u_i(delta)
 * over contributing agents i. The distribution is efficient iff the optimum is
 * at most `tol` (default 1e-7 |C|); otherwise the maximizer dominates it.
 * Small programs are solved exactly on rationalized inputs.
 */
inline AxiomReport check_efficiency(const Instance& instance, const Distribution& delta,
                                    std::optional<double> tol = std::nullopt) {
  detail::require_pool_total(instance, delta);
  AxiomReport report;
  report.axiom = "efficiency";
  report.tolerance = tol.value_or(default_axiom_tolerance * pool(instance));
  report.tested_points = 1;

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < instance.num_agents(); ++i) {
    if (instance.agents[i].contribution > 0.0) active.push_back(i);
  }
  if (active.empty()) return report;

  const std::size_t m = instance.num_projects();
  std::vector<double> dominating(m);
  if (active.size() + 1 + m <= exact_lp_limit) {
    const auto sol = detail::efficiency_lp<Rational>(
        instance, delta, active, [](double v) { return rationalize(v); }, Rational(0));
    if (sol.status != LpStatus::optimal) {
      throw Error(ErrorKind::LpFailure, "efficiency LP did not reach an optimum");
    }
    for (std::size_t x = 0; x < m; ++x) dominating[x] = to_double(sol.x[x]);
  } else {
    const auto sol = detail::efficiency_lp<double>(
        instance, delta, active, [](double v) { return v; }, 1e-12 * std::max(1.0, pool(instance)));
    if (sol.status != LpStatus::optimal) {
      throw Error(ErrorKind::LpFailure, "efficiency LP did not reach an optimum");
    }
    for (std::size_t x = 0; x < m; ++x) dominating[x] = std::max(0.0, sol.x[x]);
  }

  EfficiencyWitness w;
  w.dominating = Distribution::from_spend(std::move(dominating));
  w.utilities_before = utilities_of(instance, delta);
  w.utilities_after = utilities_of(instance, w.dominating);
  for (std::size_t i : active) w.total_gain += w.utilities_after[i] - w.utilities_before[i];
  if (w.total_gain > report.tolerance) {
    report.holds = false;
    report.witness = std::move(w);
  }
  return report;
}

/// Evenly spaced grid on [0, top], both endpoints included.
inline std::vector<double> contribution_grid(double top, std::size_t grid_size) {
  if (grid_size < 2) throw Error(ErrorKind::InvalidValue, "grid needs at least 2 points");
  std::vector<double> grid(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    grid[k] = top * static_cast<double>(k) / static_cast<double>(grid_size - 1);
  }
  grid.back() = top;
  return grid;
}

/// u_i(f(C_{-i}, c)) for each c in `grid`.
inline std::vector<ContributionSample> contribution_sweep(MechanismId mechanism,
                                                          const Instance& instance,
                                                          std::size_t agent,
                                                          const std::vector<double>& grid,
                                                          const SolverConfig& solver = {}) {
  detail::require_agent(instance, agent);
  std::vector<ContributionSample> samples;
  for (double c : grid) {
    const Instance profile = with_contribution(instance, agent, c);
    const double u = utility_of(profile, agent, run_mechanism(mechanism, profile, solver));
    samples.push_back({c, u, u - c});
  }
  return samples;
}

/**
 * Contribution incentive-compatibility for one agent, on a finite grid:
 * g(c) = u_i(f(C_{-i}, c)) - c must be largest at c = C_i, up to `tol`.
 * Assumes the min-positive-utility-1 normalization.
 */
inline AxiomReport check_cic(MechanismId mechanism, const Instance& instance, std::size_t agent,
                             std::size_t grid_size = default_grid_size,
                             double tol = default_axiom_tolerance,
                             const SolverConfig& solver = {}) {
  detail::require_agent(instance, agent);
  const double own = instance.agents[agent].contribution;
  AxiomReport report;
  report.axiom = "cic";
  report.tolerance = tol;
  report.samples =
      contribution_sweep(mechanism, instance, agent, contribution_grid(own, grid_size), solver);
  report.tested_points = report.samples.size();

  const double at_own = report.samples.back().net;
  const ContributionSample* worst = nullptr;
  for (const auto& s : report.samples) {
    if (s.net > at_own + tol && (!worst || s.net > worst->net)) worst = &s;
  }
  if (worst) {
    report.holds = false;
    report.witness = CicWitness{agent, own, worst->contribution, worst->net, at_own};
  }
  return report;
}

/**
 * Strong variant: u_i(f(C)) - C_i u_i^max must be at least
 * u_i(f(C_{-i}, c)) - c u_i^max. By default only c = 0 is compared; with
 * `full_grid` every grid point is.
 */
inline AxiomReport check_strong_cic(MechanismId mechanism, const Instance& instance,
                                    std::size_t agent, double tol = default_axiom_tolerance,
                                    bool full_grid = false,
                                    std::size_t grid_size = default_grid_size,
                                    const SolverConfig& solver = {}) {
  detail::require_agent(instance, agent);
  const double own = instance.agents[agent].contribution;
  const double top = instance.agents[agent].max_utility();
  const std::vector<double> grid =
      full_grid ? contribution_grid(own, grid_size) : std::vector<double>{0.0, own};

  AxiomReport report;
  report.axiom = "strong_cic";
  report.tolerance = tol;
  report.samples = contribution_sweep(mechanism, instance, agent, grid, solver);
  for (auto& s : report.samples) s.net = s.utility - s.contribution * top;
  report.tested_points = report.samples.size();

  const double at_own = report.samples.back().net;
  const ContributionSample* worst = nullptr;
  for (const auto& s : report.samples) {
    if (s.net > at_own + tol && (!worst || s.net > worst->net)) worst = &s;
  }
  if (worst) {
    report.holds = false;
    report.witness = CicWitness{agent, own, worst->contribution, worst->net, at_own};
  }
  return report;
}

/**
 * Experimental intermediate form for the Nash rule. With delta = nash(C) and
 * delta_eps(x) = eps * delta(x) u_i(x) / u_i(delta), a distribution of total
 * eps, checks u_i(nash(C_{-i}, C_i + eps)) >= u_i(delta) + u_i(delta_eps) for
 * each eps. Failures are recorded per point rather than raised.
 */
inline AxiomReport check_conjectured_cic(const Instance& instance, std::size_t agent,
                                         const std::vector<double>& epsilons,
                                         double tol = default_axiom_tolerance,
                                         const SolverConfig& solver = {}) {
  detail::require_agent(instance, agent);
  const Agent& who = instance.agents[agent];
  if (!(who.contribution > 0.0)) {
    throw Error(ErrorKind::InvalidValue, "agent '" + who.name + "' must contribute");
  }
  const Distribution delta = run_mechanism(MechanismId::nash, instance, solver);
  const double base = utility_of(instance, agent, delta);

  AxiomReport report;
  report.axiom = "conjectured_cic";
  report.tolerance = tol;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) throw Error(ErrorKind::InvalidValue, "epsilon must be nonnegative");
    const Instance raised = with_contribution(instance, agent, who.contribution + eps);
    const double lhs = utility_of(raised, agent, run_mechanism(MechanismId::nash, raised, solver));
    double proportional = 0.0;
    for (std::size_t x = 0; x < instance.num_projects(); ++x) {
      const double share = eps * delta.spend[x] * who.utilities[x] / base;
      proportional += share * who.utilities[x];
    }
    const double rhs = base + proportional;
    const bool ok = lhs >= rhs - tol;
    report.conjecture.push_back({eps, lhs, rhs, ok});
    if (!ok && report.holds) {
      report.holds = false;
      report.witness = CicWitness{agent, who.contribution, who.contribution + eps, rhs, lhs};
    }
  }
  report.tested_points = report.conjecture.size();
  return report;
}

/**
 * Group guarantee of the Nash rule: if every member of `group` only accepts
 * projects in A' (by default the union of their acceptable sets), the Nash
 * distribution spends at least the group's total contribution on A'.
 */
inline AxiomReport check_core_share(const Instance& instance,
                                    const std::vector<std::size_t>& group,
                                    double tol = default_axiom_tolerance,
                                    std::optional<std::vector<std::size_t>> projects = std::nullopt,
                                    const SolverConfig& solver = {}) {
  if (group.empty()) throw Error(ErrorKind::GroupNotEligible, "group is empty");
  const std::size_t m = instance.num_projects();
  std::vector<bool> in_scope(m, false);
  if (projects) {
    for (std::size_t x : *projects) {
      if (x >= m) throw Error(ErrorKind::ProjectMismatch, "project index out of range");
      in_scope[x] = true;
    }
  }
  double required = 0.0;
  for (std::size_t i : group) {
    detail::require_agent(instance, i);
    const Agent& a = instance.agents[i];
    if (!(a.contribution > 0.0)) {
      throw Error(ErrorKind::GroupNotEligible, "agent '" + a.name + "' does not contribute");
    }
    required += a.contribution;
    for (std::size_t x = 0; x < m; ++x) {
      if (!a.acceptable(x)) continue;
      if (projects && !in_scope[x]) {
        throw Error(ErrorKind::GroupNotEligible,
                    "agent '" + a.name + "' accepts project '" + instance.projects[x] +
                        "' outside the group's project set");
      }
      if (!projects) in_scope[x] = true;
    }
  }

  const Distribution delta = run_mechanism(MechanismId::nash, instance, solver);
  double spend = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    if (in_scope[x]) spend += delta.spend[x];
  }
  AxiomReport report;
  report.axiom = "core_share";
  report.tolerance = tol;
  report.tested_points = 1;
  if (spend < required - tol * pool(instance)) {
    report.holds = false;
    report.witness = CoreWitness{group, spend, required};
  }
  return report;
}

/// Decomposability (plain or strong) of a given distribution as a report.
inline AxiomReport check_decomposability(const Instance& instance, const Distribution& delta,
                                         bool strong = false) {
  const auto verdict =
      strong ? check_strong_decomposable(instance, delta) : check_decomposable(instance, delta);
  AxiomReport report;
  report.axiom = strong ? "strong_decomposability" : "decomposability";
  report.holds = verdict.decomposable;
  report.tested_points = 1;
  report.tolerance = distribution_tolerance(pool(instance));
  if (verdict.witness) report.witness = *verdict.witness;
  return report;
}

}  // namespace nashfund
