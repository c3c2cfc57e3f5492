#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nashfund/axioms.hpp"
#include "nashfund/decomposition.hpp"
#include "nashfund/fixtures.hpp"
#include "nashfund/mechanisms.hpp"
#include "nashfund/solver.hpp"

namespace nashfund {

struct Expectation {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReferenceExample {
  std::string name;
  std::string description;
  std::function<std::vector<Expectation>(const SolverConfig&)> run;
};

namespace detail {

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline Expectation expect(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, std::move(detail)};
}

inline bool spend_near(const Distribution& d, const std::vector<double>& want, double tol) {
  if (d.spend.size() != want.size()) return false;
  for (std::size_t x = 0; x < want.size(); ++x) {
    if (!near(d.spend[x], want[x], tol)) return false;
  }
  return true;
}

inline std::string spend_text(const Distribution& d) {
  std::string s = "(";
  for (std::size_t x = 0; x < d.spend.size(); ++x) s += (x ? ", " : "") + fmt(d.spend[x]);
  return s + ")";
}

inline bool subset_is(const std::optional<SubsetWitness>& w, std::vector<std::size_t> want) {
  return w && w->agent_subset == want;
}

inline std::vector<Expectation> example_two_agent_cardinal(const SolverConfig& config) {
  const Instance inst = fixtures::two_agent_cardinal();
  std::vector<Expectation> out;
  const auto result = solve_nash(inst, config);
  const auto& d = result.distribution;
  out.push_back(expect("nash = 1.5a + 0.5b", spend_near(d, {1.5, 0.5}, 1e-6), spend_text(d)));
  const auto parts = proportional_decomposition(inst, d);
  out.push_back(expect("parts = a and 0.5a + 0.5b",
                       spend_near(parts.parts[0], {1.0, 0.0}, 1e-6) &&
                           spend_near(parts.parts[1], {0.5, 0.5}, 1e-6),
                       spend_text(parts.parts[0]) + " " + spend_text(parts.parts[1])));
  const auto util = run_mechanism(MechanismId::utilitarian, inst, config);
  out.push_back(expect("utilitarian = 2b", spend_near(util, {0.0, 2.0}, 1e-12), spend_text(util)));
  const auto split = check_decomposable(inst, util);
  out.push_back(expect("2b not decomposable, witness {1}",
                       !split.decomposable && subset_is(split.witness, {0})));
  for (std::size_t i = 0; i < 2; ++i) {
    const auto r = check_cic(MechanismId::nash, inst, i, default_grid_size, 1e-6, config);
    out.push_back(expect("nash CIC holds for agent " + std::to_string(i + 1), r.holds));
  }
  {
    // u1(nash(1 - e, 1)) + e = 1.5 - 0.5 e and
    // u2(nash(1, 1 - e)) + e = 6 - 2e - 2 min(1.5, 2 - e).
    const auto r1 = check_cic(MechanismId::nash, inst, 0, default_grid_size, 1e-6, config);
    const auto r2 = check_cic(MechanismId::nash, inst, 1, default_grid_size, 1e-6, config);
    double worst = 0.0;
    for (const auto& s : r1.samples) {
      const double e = 1.0 - s.contribution;
      worst = std::max(worst, std::abs(s.utility + e - (1.5 - 0.5 * e)));
    }
    for (const auto& s : r2.samples) {
      const double e = 1.0 - s.contribution;
      worst = std::max(worst, std::abs(s.utility + e - (6 - 2 * e - 2 * std::min(1.5, 2 - e))));
    }
    out.push_back(expect("CIC closed forms match the grid", worst <= 1e-6,
                         "max deviation " + fmt(worst)));
  }
  const auto bad = check_cic(MechanismId::utilitarian, inst, 0, default_grid_size, 1e-7, config);
  out.push_back(expect("utilitarian violates CIC for agent 1",
                       !bad.holds && std::holds_alternative<CicWitness>(bad.witness) &&
                           std::get<CicWitness>(bad.witness).agent == 0));
  return out;
}

inline std::vector<Expectation> example_irrational(const SolverConfig& config) {
  const Instance inst = fixtures::irrational_optimum();
  std::vector<Expectation> out;
  const auto result = solve_nash(inst, config);
  const double a = (7.0 - std::sqrt(17.0)) / 4.0;
  const auto& d = result.distribution;
  out.push_back(expect("nash a = b = (7 - sqrt 17)/4, c = 4 - 2a",
                       spend_near(d, {a, a, 4 - 2 * a}, 1e-6), spend_text(d)));
  out.push_back(expect("KKT residual <= 1e-8", result.kkt.max_residual <= 1e-8,
                       fmt(result.kkt.max_residual)));
  const auto parts = proportional_decomposition(inst, d);
  bool sums = true;
  for (std::size_t x = 0; x < 3; ++x) {
    double s = 0.0;
    for (const auto& p : parts.parts) s += p.spend[x];
    sums = sums && near(s, d.spend[x], 1e-8);
  }
  for (const auto& p : parts.parts) {
    double t = 0.0;
    for (double v : p.spend) t += v;
    sums = sums && near(t, 1.0, 1e-8);
  }
  out.push_back(expect("proportional parts sum to nash, totals 1", sums));
  const auto core = check_core_share(inst, {3}, 1e-7, std::nullopt, config);
  out.push_back(expect("agent 4 gets at least 1 on c", core.holds, fmt(d.spend[2])));
  return out;
}

inline std::vector<Expectation> example_tied(const SolverConfig& config) {
  const Instance inst = fixtures::tied_optimum();
  const auto d = solve_nash(inst, config).distribution;
  bool ok = true;
  for (double u : utilities_of(inst, d)) ok = ok && near(u, 2.0, 1e-6);
  return {expect("every agent has utility 2", ok, spend_text(d))};
}

inline std::vector<Expectation> example_pet_projects(const SolverConfig&) {
  const Instance inst = fixtures::pet_projects(0.5);
  std::vector<Expectation> out;
  const auto pets = Distribution::from_spend({1, 1, 0});
  out.push_back(expect("a + b strongly decomposable",
                       check_strong_decomposable(inst, pets).decomposable));
  out.push_back(expect("2x not strongly decomposable",
                       !check_strong_decomposable(inst, Distribution::from_spend({0, 0, 2}))
                            .decomposable));
  const auto eff = check_efficiency(inst, pets);
  bool witness_ok = false;
  if (const auto* w = std::get_if<EfficiencyWitness>(&eff.witness)) {
    witness_ok = w->utilities_after[0] >= 2 - 1e-6 && w->utilities_after[1] >= 2 - 1e-6;
  }
  out.push_back(expect("a + b dominated by a distribution giving both >= 2",
                       !eff.holds && witness_ok));
  return out;
}

inline std::vector<Expectation> example_three_pets(const SolverConfig& config) {
  const Instance inst = fixtures::three_pet_projects(0.25);
  bool violated = false;
  for (std::size_t i = 0; i < inst.num_agents(); ++i) {
    violated = violated ||
               !check_strong_cic(MechanismId::nash, inst, i, 1e-7, false, default_grid_size, config)
                    .holds;
  }
  return {expect("nash violates strong CIC for some agent", violated)};
}

inline std::vector<Expectation> example_anticut(const SolverConfig& config) {
  std::vector<Expectation> out;
  const auto full = run_mechanism(MechanismId::anticut, fixtures::anticut_pair(1, 1));
  const auto half = run_mechanism(MechanismId::anticut, fixtures::anticut_pair(1, 0));
  out.push_back(expect("anticut(1,1) = a + b", spend_near(full, {1, 1}, 1e-12), spend_text(full)));
  out.push_back(
      expect("anticut(1,0) = 0.5a + 0.5b", spend_near(half, {0.5, 0.5}, 1e-12), spend_text(half)));
  const auto r = check_cic(MechanismId::anticut, fixtures::anticut_pair(1, 1), 1,
                           default_grid_size, 1e-7, config);
  bool gap = false;
  if (const auto* w = std::get_if<CicWitness>(&r.witness)) {
    gap = w->agent == 1 && w->deviation == 0.0 && near(w->lhs, 0.5, 1e-12) && near(w->rhs, 0.0, 1e-12);
  }
  out.push_back(expect("anticut violates CIC for agent 2: 0.5 > 0", !r.holds && gap));
  return out;
}

inline std::vector<Expectation> example_appendix_c(const SolverConfig& config) {
  const Instance inst = fixtures::three_agent_cic_profile();
  std::vector<Expectation> out;
  const auto d = run_mechanism(MechanismId::appendix_c, inst);
  out.push_back(expect("f(1,1,1) = a + 2d", spend_near(d, {1, 0, 0, 2}, 1e-12), spend_text(d)));
  const auto v = check_decomposable(inst, d);
  out.push_back(expect("a + 2d not decomposable, witness {1,2}",
                       !v.decomposable && subset_is(v.witness, {0, 1})));
  bool cic = true;
  for (std::size_t i = 0; i < 3; ++i) {
    cic = cic && check_cic(MechanismId::appendix_c, inst, i, default_grid_size, 1e-9, config).holds;
  }
  out.push_back(expect("appendix_c satisfies CIC on the grid", cic));
  return out;
}

}  // namespace detail

inline std::vector<ReferenceExample> reference_examples() {
  return {
      {"two_agent_cardinal", "u1 = (1,0), u2 = (1,3); solve, split, CIC closed forms",
       detail::example_two_agent_cardinal},
      {"irrational_optimum", "approval sets ab, ac, bc, c; irrational Nash spend",
       detail::example_irrational},
      {"tied_optimum", "approval sets ac, ad, bc, bd; utilities unique, spend is not",
       detail::example_tied},
      {"pet_projects", "strong decomposability versus efficiency", detail::example_pet_projects},
      {"three_pet_projects", "strong CIC versus efficiency", detail::example_three_pets},
      {"anticut_pair", "anticut is decomposable but not CIC", detail::example_anticut},
      {"appendix_c", "CIC mechanism that is not decomposable", detail::example_appendix_c},
  };
}

}  // namespace nashfund
