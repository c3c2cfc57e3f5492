#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "nashfund/error.hpp"
#include "nashfund/model.hpp"

namespace nashfund {

struct SolverConfig {
  double epsilon = 1e-9;
  long max_iters = 1'000'000;
  bool record_trace = false;
};

struct TraceRow {
  long iter = 0;
  double log_nash = 0.0;
  double gap_bound = 0.0;
  double step_l1 = 0.0;
};

/// First-order optimality certificate. With s(x) = sum_i C_i u_i(x) / u_i(delta),
/// the optimum has s(x) = 1 on its support and s(x) <= 1 elsewhere.
struct KktReport {
  double lambda_estimate = 1.0;
  std::vector<double> stationarity;
  std::vector<double> residual;
  // Multiplier for delta(x) >= 0: max(0, 1 - s(x)) off support, 0 on it.
  std::vector<double> mu;
  double max_residual = 0.0;
};

struct SolveResult {
  Distribution distribution;
  long iterations = 0;
  // Iterations spent on the pruned face after the main run; 0 if not used.
  long polish_iterations = 0;
  double gap_bound = 0.0;
  std::vector<TraceRow> trace;
  KktReport kkt;
};

/// Thrown when the iteration budget runs out; still carries the last iterate.
class MaxItersExceeded : public Error {
 public:
  explicit MaxItersExceeded(SolveResult best)
      : Error(ErrorKind::MaxItersExceeded,
              "gap bound " + std::to_string(best.gap_bound) + " after " +
                  std::to_string(best.iterations) + " iterations"),
        best_(std::move(best)) {}

  const SolveResult& best() const noexcept { return best_; }

 private:
  SolveResult best_;
};

namespace detail {

inline void require_pool_total(const Instance& instance, const Distribution& delta) {
  check_distribution(instance, delta);
  const double c = pool(instance);
  if (std::abs(delta.total - c) > distribution_tolerance(c)) {
    throw Error(ErrorKind::InvalidValue,
                "distribution total " + std::to_string(delta.total) +
                    " differs from the pool " + std::to_string(c));
  }
}

/// s(x) for every project. Agents with C_i = 0 are ignored.
inline std::vector<double> stationarity(const Instance& instance, std::span<const double> spend) {
  std::vector<double> s(spend.size(), 0.0);
  for (const auto& agent : instance.agents) {
    if (agent.contribution <= 0.0) continue;
    const double u = utility_of(agent, spend);
    if (!(u > 0.0)) {
      throw Error(ErrorKind::ZeroUtilityAgent,
                  "agent '" + agent.name + "' gets zero utility; the dynamic is undefined");
    }
    const double w = agent.contribution / u;
    for (std::size_t x = 0; x < spend.size(); ++x) s[x] += w * agent.utilities[x];
  }
  return s;
}

inline double gap_from_stationarity(std::span<const double> s) {
  double top = 0.0;
  for (double v : s) top = std::max(top, v);
  return std::max(0.0, std::log(top));
}

/// delta(x) * s(x), rescaled so the spend sums exactly to `total`.
inline std::vector<double> apply_step(std::span<const double> spend, std::span<const double> s,
                                      double total) {
  std::vector<double> next(spend.size());
  double sum = 0.0;
  for (std::size_t x = 0; x < spend.size(); ++x) {
    next[x] = spend[x] * s[x];
    sum += next[x];
  }
  if (sum > 0.0) {
    const double scale = total / sum;
    for (double& v : next) v *= scale;
  }
  return next;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) d += std::abs(a[x] - b[x]);
  return d;
}

}  // namespace detail

/// One round of the proportional response dynamic: every contributing agent
/// re-spends its contribution in proportion to the utility each project gave
/// it under `delta`.
inline Distribution proportional_response_step(const Instance& instance,
                                               const Distribution& delta) {
  detail::require_pool_total(instance, delta);
  const auto s = detail::stationarity(instance, delta.spend);
  const double c = pool(instance);
  return {c, detail::apply_step(delta.spend, s, c)};
}

/**
 * Certified bound on how far the contribution-weighted mean log utility
 * F(delta) / |C| is below its maximum: max_x log s(x), clamped at 0. The
 * maximum runs over every project, on support or not.
 */
inline double cover_gap_bound(const Instance& instance, const Distribution& delta) {
  detail::require_pool_total(instance, delta);
  return detail::gap_from_stationarity(detail::stationarity(instance, delta.spend));
}

inline double default_support_threshold(const Instance& instance) {
  return 1e-7 * pool(instance);
}

inline KktReport kkt_check(const Instance& instance, const Distribution& delta,
                           double support_threshold) {
  check_distribution(instance, delta);
  KktReport report;
  report.stationarity = detail::stationarity(instance, delta.spend);
  const std::size_t m = instance.num_projects();
  report.residual.assign(m, 0.0);
  report.mu.assign(m, 0.0);
  double support_sum = 0.0;
  std::size_t support_count = 0;
  for (std::size_t x = 0; x < m; ++x) {
    const double s = report.stationarity[x];
    if (delta.spend[x] > support_threshold) {
      report.residual[x] = std::abs(s - 1.0);
      support_sum += s;
      ++support_count;
    } else {
      report.residual[x] = std::max(0.0, s - 1.0);
      report.mu[x] = std::max(0.0, 1.0 - s);
    }
    report.max_residual = std::max(report.max_residual, report.residual[x]);
  }
  report.lambda_estimate = support_count > 0 ? support_sum / support_count : 1.0;
  return report;
}

inline KktReport kkt_check(const Instance& instance, const Distribution& delta) {
  return kkt_check(instance, delta, default_support_threshold(instance));
}

namespace detail {

inline void validate_config(const SolverConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidValue, "epsilon must be positive");
  }
  if (config.max_iters < 1) {
    throw Error(ErrorKind::InvalidValue, "max_iters must be at least 1");
  }
}

// Projects below this share of the pool that are still shrinking are pruning
// candidates.
inline constexpr double prune_share = 1e-3;

struct Polished {
  std::vector<double> spend;
  long iterations = 0;
};

/**
 * Where the optimum sits on a face with s(x) = 1 for some zero-spend project
 * the dynamic only drives that spend down like 1/k. This zeroes the small
 * shrinking projects and keeps iterating on the remaining face. The outcome
 * is kept only if the Cover bound over all projects meets epsilon and the
 * objective did not drop, so the certificate is the same as for the plain run.
 */
inline std::optional<Polished> polish_on_face(const Instance& active,
                                              const std::vector<double>& spend,
                                              double objective, const SolverConfig& config,
                                              long budget) {
  const double c = pool(active);
  const auto s = stationarity(active, spend);
  std::vector<double> pruned = spend;
  bool any = false;
  for (std::size_t x = 0; x < spend.size(); ++x) {
    if (spend[x] > 0.0 && spend[x] <= prune_share * c && s[x] < 1.0) {
      pruned[x] = 0.0;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  double sum = 0.0;
  for (double v : pruned) sum += v;
  for (double& v : pruned) v *= c / sum;
  for (const auto& agent : active.agents) {
    if (!(utility_of(agent, pruned) > 0.0)) return std::nullopt;
  }

  Polished out{std::move(pruned), 0};
  while (true) {
    const auto st = stationarity(active, out.spend);
    if (gap_from_stationarity(st) <= config.epsilon) break;
    if (out.iterations >= budget) return std::nullopt;
    out.spend = apply_step(out.spend, st, c);
    ++out.iterations;
  }
  const double polished = log_nash_objective(active, Distribution{c, out.spend});
  if (polished < objective - 1e-12 * (1.0 + std::abs(objective))) return std::nullopt;
  return out;
}

}  // namespace detail

/**
 * Maximizes the Nash product prod_i u_i(delta)^{C_i} by iterating the
 * proportional response dynamic from `start`, stopping once the Cover gap
 * bound drops to config.epsilon. `start` must have full support for the
 * iterates to approach the optimum.
 *
 * Agents with zero contribution do not take part. If nobody contributes the
 * result is the empty distribution.
 */
inline SolveResult solve_nash(const Instance& instance, const SolverConfig& config,
                              const Distribution& start) {
  detail::validate_config(config);
  const Instance active = contributing_only(instance);
  const std::size_t m = instance.num_projects();
  const double c = pool(active);

  SolveResult result;
  if (active.agents.empty() || c <= 0.0) {
    result.distribution = Distribution::zero(m);
    return result;
  }
  detail::require_pool_total(active, start);

  std::vector<double> spend = start.spend;
  long iter = 0;
  double gap = 0.0;
  double objective = 0.0;
  double last_step = 0.0;
  while (true) {
    const auto s = detail::stationarity(active, spend);
    gap = detail::gap_from_stationarity(s);
    if (config.record_trace) {
      objective = log_nash_objective(active, Distribution{c, spend});
      result.trace.push_back({iter, objective, gap, last_step});
    }
    if (gap <= config.epsilon || iter >= config.max_iters) break;
    auto next = detail::apply_step(spend, s, c);
    last_step = detail::l1_distance(next, spend);
    spend = std::move(next);
    ++iter;
  }

  if (gap <= config.epsilon) {
    const double objective = log_nash_objective(active, Distribution{c, spend});
    const long budget = std::min(config.max_iters - iter, 10 * iter + 1000);
    if (auto polished = detail::polish_on_face(active, spend, objective, config, budget)) {
      spend = std::move(polished->spend);
      result.polish_iterations = polished->iterations;
      gap = detail::gap_from_stationarity(detail::stationarity(active, spend));
    }
  }

  result.distribution = Distribution{c, std::move(spend)};
  result.iterations = iter;
  result.gap_bound = gap;
  result.kkt = kkt_check(active, result.distribution);
  if (gap > config.epsilon) throw MaxItersExceeded(std::move(result));
  return result;
}

/// Uniform full-support start, |C| / m on every project.
inline Distribution uniform_start(const Instance& instance) {
  const double c = pool(instance);
  const std::size_t m = instance.num_projects();
  return {c, std::vector<double>(m, c / static_cast<double>(m))};
}

inline SolveResult solve_nash(const Instance& instance, const SolverConfig& config = {}) {
  return solve_nash(instance, config, uniform_start(instance));
}

}  // namespace nashfund
