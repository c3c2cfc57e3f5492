// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nashfund/nashfund.hpp"

using namespace nashfund;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const SolverConfig solver{};

/// Audits solver runs for the dynamic-quality criterion: monotone objective,
/// step gain against squared step length, final gap, and the gap against ten
/// restarts from random full-support points.
struct TraceAudit {
  std::mt19937_64 rng{8};
  std::size_t runs = 0;
  double worst_monotone = 0.0;  // most negative (gain + slack), clamped at 0
  double worst_pinsker = std::numeric_limits<double>::infinity();
  double worst_final_gap = 0.0;
  double worst_restart = -std::numeric_limits<double>::infinity();
  std::size_t failures = 0;

  void audit(const Instance& profile) {
    const Instance inst = contributing_only(profile);
    if (inst.agents.empty()) return;
    const double c = pool(inst);
    SolverConfig cfg = solver;
    cfg.record_trace = true;
    const SolveResult r = solve_nash(inst, cfg);
    ++runs;
    bool ok = r.gap_bound <= cfg.epsilon;
    worst_final_gap = std::max(worst_final_gap, r.gap_bound);
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      const double before = r.trace[k - 1].log_nash;
      const double gain = r.trace[k].log_nash - before;
      const double slack = 1e-12 * (1.0 + std::abs(before));
      if (gain < -slack) {
        ok = false;
        worst_monotone = std::min(worst_monotone, gain);
      }
      // Gain in bits against ||step||_1^2 / (2 ln 2 |C|).
      const double l1 = r.trace[k].step_l1;
      const double margin =
          gain / std::numbers::ln2 - l1 * l1 / (2.0 * std::numbers::ln2 * c);
      worst_pinsker = std::min(worst_pinsker, margin);
      if (margin < -1e-10) ok = false;
    }
    const double f = log_nash_objective(inst, r.distribution);
    double best = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 10; ++t) {
      const Distribution start = random_distribution(rng, inst.num_projects(), c);
      best = std::max(best, log_nash_objective(inst, solve_nash(inst, solver, start).distribution));
    }
    const double excess = (best - f) / c - r.gap_bound;
    worst_restart = std::max(worst_restart, excess);
    if (excess > 1e-7) ok = false;
    failures += !ok;
  }
};

TraceAudit audit;

Verdict two_agent_cardinal() {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = fixtures::two_agent_cardinal();
  const auto r = solve_nash(inst, solver);
  const auto parts = proportional_decomposition(inst, r.distribution);
  const double elapsed = seconds_since(start);
  const double e1 = max_abs_diff(r.distribution.spend, {1.5, 0.5});
  const double e2 = std::max(max_abs_diff(parts.parts[0].spend, {1.0, 0.0}),
                             max_abs_diff(parts.parts[1].spend, {0.5, 0.5}));
  audit.audit(inst);
  return {e1 <= 1e-6 && e2 <= 1e-6 && elapsed < 1.0,
          "spend error " + fmt(e1) + ", split error " + fmt(e2) + ", " + fmt(elapsed) + " s"};
}

Verdict irrational_optimum() {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = fixtures::irrational_optimum();
  const auto r = solve_nash(inst, solver);
  const double elapsed = seconds_since(start);
  const double a = (7.0 - std::sqrt(17.0)) / 4.0;
  const double err = std::max({std::abs(r.distribution.spend[0] - a),
                               std::abs(r.distribution.spend[1] - a),
                               std::abs(r.distribution.spend[2] - (4.0 - 2.0 * r.distribution.spend[0]))});
  audit.audit(inst);
  return {err <= 1e-6 && r.kkt.max_residual <= 1e-8 && elapsed < 2.0,
          "spend error " + fmt(err) + ", KKT " + fmt(r.kkt.max_residual) + ", " + fmt(elapsed) +
              " s"};
}

Verdict tied_optimum() {
  const Instance inst = fixtures::tied_optimum();
  const auto u = utilities_of(inst, solve_nash(inst, solver).distribution);
  audit.audit(inst);
  const double err = max_abs_diff(u, std::vector<double>(u.size(), 2.0));
  return {err <= 1e-6, "utility error " + fmt(err)};
}

Verdict decomposability_suite() {
  RandomInstanceConfig cfg;
  cfg.max_agents = 6;
  cfg.max_projects = 5;
  std::mt19937_64 rng(4);
  std::size_t not_decomposable = 0, disagreements = 0;
  for (int k = 0; k < 500; ++k) {
    const Instance inst = random_instance(rng, cfg);
    const auto delta = solve_nash(inst, solver).distribution;
    const auto flow = check_decomposable(inst, delta);
    const auto exact = brute_force_decomposability_oracle(inst, delta, false);
    not_decomposable += !flow.decomposable;
    disagreements += flow.decomposable != exact.decomposable;
    audit.audit(inst);
  }
  return {not_decomposable == 0 && disagreements == 0,
          "500 instances, " + std::to_string(not_decomposable) + " not decomposable, " +
              std::to_string(disagreements) + " flow/oracle disagreements"};
}

Verdict cic_suite() {
  RandomInstanceConfig cfg;
  cfg.max_agents = 5;
  cfg.max_projects = 4;
  std::mt19937_64 rng(5);
  std::size_t violations = 0, non_monotone = 0, checks = 0;
  for (int k = 0; k < 500; ++k) {
    const Instance inst = random_instance(rng, cfg);
    for (std::size_t i = 0; i < inst.num_agents(); ++i) {
      const auto r = check_cic(MechanismId::nash, inst, i, 21, 1e-6, solver);
      ++checks;
      violations += !r.holds;
      for (std::size_t p = 1; p < r.samples.size(); ++p) {
        if (r.samples[p].utility < r.samples[p - 1].utility - 1e-7) {
          ++non_monotone;
          break;
        }
      }
      for (double c : contribution_grid(inst.agents[i].contribution, 21)) {
        audit.audit(with_contribution(inst, i, c));
      }
    }
  }

  // Closed forms on the two-agent cardinal profile.
  const Instance t = fixtures::two_agent_cardinal();
  double worst = 0.0;
  for (const auto& s : check_cic(MechanismId::nash, t, 0, 21, 1e-6, solver).samples) {
    const double e = 1.0 - s.contribution;
    worst = std::max(worst, std::abs(s.utility + e - (1.5 - 0.5 * e)));
  }
  for (const auto& s : check_cic(MechanismId::nash, t, 1, 21, 1e-6, solver).samples) {
    const double e = 1.0 - s.contribution;
    worst = std::max(worst, std::abs(s.utility + e - (6 - 2 * e - 2 * std::min(1.5, 2 - e))));
  }
  for (std::size_t i = 0; i < 2; ++i) {
    for (double c : contribution_grid(1.0, 21)) audit.audit(with_contribution(t, i, c));
  }
  return {violations == 0 && non_monotone == 0 && worst <= 1e-6,
          std::to_string(checks) + " agent checks, " + std::to_string(violations) +
              " violations, " + std::to_string(non_monotone) + " non-monotone, closed-form error " +
              fmt(worst)};
}

Verdict counterexamples() {
  std::vector<std::string> failed;
  const Instance t = fixtures::two_agent_cardinal();
  const auto util = check_cic(MechanismId::utilitarian, t, 0, 21, 1e-7, solver);
  if (util.holds || std::get<CicWitness>(util.witness).agent != 0) failed.push_back("utilitarian");

  const auto anti = check_cic(MechanismId::anticut, fixtures::anticut_pair(1, 1), 1, 21, 1e-7, solver);
  bool gap = false;
  if (const auto* w = std::get_if<CicWitness>(&anti.witness)) {
    gap = w->deviation == 0.0 && std::abs(w->lhs - 0.5) <= 1e-12 && std::abs(w->rhs) <= 1e-12;
  }
  if (anti.holds || !gap) failed.push_back("anticut");

  const Instance profile = fixtures::three_agent_cic_profile();
  const auto d = run_mechanism(MechanismId::appendix_c, profile);
  const auto v = check_decomposable(profile, d);
  if (max_abs_diff(d.spend, {1, 0, 0, 2}) != 0.0 || v.decomposable || !v.witness ||
      v.witness->agent_subset != std::vector<std::size_t>{0, 1}) {
    failed.push_back("appendix_c");
  }
  std::string detail = failed.empty() ? "utilitarian, anticut (0.5 > 0), appendix_c ({1,2})" : "";
  for (const auto& f : failed) detail += f + " failed; ";
  return {failed.empty(), detail};
}

Verdict strong_axioms() {
  const Instance pets = fixtures::pet_projects(0.5);
  const auto ab = Distribution::from_spend({1, 1, 0});
  const bool strong = check_strong_decomposable(pets, ab).decomposable;
  const auto eff = check_efficiency(pets, ab);
  bool witness = false;
  if (const auto* w = std::get_if<EfficiencyWitness>(&eff.witness)) {
    witness = w->utilities_after[0] >= 2 - 1e-6 && w->utilities_after[1] >= 2 - 1e-6;
  }
  const Instance three = fixtures::three_pet_projects(0.25);
  std::string violating;
  for (std::size_t i = 0; i < three.num_agents(); ++i) {
    if (!check_strong_cic(MechanismId::nash, three, i, 1e-7, false, 21, solver).holds) {
      violating += (violating.empty() ? "" : ",") + three.agents[i].name;
    }
  }
  return {strong && !eff.holds && witness && !violating.empty(),
          std::string("a + b strongly decomposable ") + (strong ? "yes" : "no") + ", dominated " +
              (!eff.holds && witness ? "yes" : "no") + ", strong CIC violated for agents {" +
              violating + "}"};
}

Verdict dynamic_quality() {
  return {audit.failures == 0 && audit.runs > 0,
          std::to_string(audit.runs) + " traced runs, " + std::to_string(audit.failures) +
              " failing; worst bits margin " + fmt(audit.worst_pinsker) + ", worst final gap " +
              fmt(audit.worst_final_gap) + ", worst restart excess " + fmt(audit.worst_restart)};
}

Verdict core_share_suite() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::size_t failures = 0;
  for (int k = 0; k < 200; ++k) {
    Instance inst = random_instance(rng, {});
    const std::size_t m = inst.num_projects();
    // Planted group: 1-3 agents accepting only a random nonempty project subset.
    std::vector<bool> scope(m, false);
    std::size_t chosen = 0;
    while (chosen == 0) {
      for (std::size_t x = 0; x < m; ++x) {
        scope[x] = coin(rng) < 0.4;
        chosen += scope[x];
      }
    }
    const std::size_t size = 1 + rng() % 3;
    std::vector<std::size_t> group;
    for (std::size_t g = 0; g < size; ++g) {
      Agent a;
      a.name = "g" + std::to_string(g + 1);
      a.contribution = 0.05 + 0.95 * coin(rng);
      a.budget = a.contribution;
      a.utilities.assign(m, 0.0);
      for (std::size_t x = 0; x < m; ++x) {
        if (scope[x] && coin(rng) < 0.7) a.utilities[x] = 1.0 + 3.0 * coin(rng);
      }
      if (std::all_of(a.utilities.begin(), a.utilities.end(), [](double u) { return u == 0; })) {
        for (std::size_t x = 0; x < m; ++x) {
          if (scope[x]) {
            a.utilities[x] = 1.0;
            break;
          }
        }
      }
      group.push_back(inst.agents.size());
      inst.agents.push_back(std::move(a));
    }
    inst = validate_and_normalize(inst);
    std::vector<std::size_t> projects;
    for (std::size_t x = 0; x < m; ++x) {
      if (scope[x]) projects.push_back(x);
    }
    failures += !check_core_share(inst, group, 1e-7, projects, solver).holds;
  }
  return {failures == 0, "200 planted groups, " + std::to_string(failures) + " short"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"two-agent cardinal profile and its split", two_agent_cardinal},
      {"irrational optimum with KKT certificate", irrational_optimum},
      {"tied optimum utilities", tied_optimum},
      {"Nash outputs decomposable, flow agrees with subset oracle", decomposability_suite},
      {"Nash contribution incentive-compatible, monotone, closed forms", cic_suite},
      {"counterexample mechanisms", counterexamples},
      {"strong decomposability and strong CIC against efficiency", strong_axioms},
      {"dynamic monotone, step bound, certified gap", dynamic_quality},
      {"core share for planted single-minded groups", core_share_suite},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %zu %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), v.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
