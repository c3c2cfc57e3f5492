#pragma once

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nashfund/nashfund.hpp"

namespace nashfund::cli {

enum ExitCode : int { ok = 0, violated = 1, input_error = 2, no_convergence = 3 };

struct CliConfig {
  std::string input;
  std::string output;
  std::string trace;
  std::string distribution;
  std::string axiom = "cic";
  std::string mechanism = "nash";
  std::vector<std::string> mechanisms;
  std::vector<std::string> agents;
  std::vector<std::string> group;
  std::vector<double> epsilons = {0.1, 0.5};
  std::vector<std::string> fixtures;
  double eps = 1e-9;
  long max_iters = 1'000'000;
  std::size_t grid = default_grid_size;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::size_t random = 0;
  std::size_t max_agents = 5;
  std::size_t max_projects = 4;
  bool strong = false;
  bool list = false;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::MaxItersExceeded:
    case ErrorKind::SolverFailure:
      return no_convergence;
    default:
      return input_error;
  }
}

class Runner {
 public:
  Runner(const CliConfig& config, std::ostream& out, std::ostream& err)
      : config_(config), out_(out), err_(err) {}

  SolverConfig solver() const {
    SolverConfig s;
    s.epsilon = config_.eps;
    s.max_iters = config_.max_iters;
    s.record_trace = !config_.trace.empty();
    return s;
  }

  Instance load_instance() const {
    if (config_.input.empty()) throw Error(ErrorKind::InvalidValue, "--input is required");
    return validate_and_normalize(instance_from_json(read_json_file(config_.input)));
  }

  void emit(const json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (config_.output.empty()) {
      out_ << text;
    } else {
      write_text_file(config_.output, text);
    }
  }

  int solve() {
    const Instance instance = load_instance();
    if (pool(instance) <= 0.0) {
      err_ << "warning: no agent contributes; returning the empty distribution\n";
      emit(to_json(instance, Distribution::zero(instance.num_projects())));
      return ok;
    }
    int code = ok;
    SolveResult result;
    try {
      result = solve_nash(instance, solver());
    } catch (const MaxItersExceeded& e) {
      err_ << "error: " << e.what() << "; writing the last iterate\n";
      result = e.best();
      code = no_convergence;
    }
    json j = to_json(instance, result.distribution);
    emit(j);
    auto& summary = config_.output.empty() ? err_ : out_;
    summary << "iterations: " << result.iterations << "\n"
            << "gap bound: " << num(result.gap_bound) << "\n"
            << "max KKT residual: " << num(result.kkt.max_residual) << "\n";
    if (!config_.trace.empty()) write_text_file(config_.trace, trace_to_csv(result.trace));
    return code;
  }

  int decompose() {
    const Instance instance = load_instance();
    if (pool(instance) <= 0.0) {
      Decomposition empty;
      for (std::size_t i = 0; i < instance.num_agents(); ++i) {
        empty.parts.push_back(Distribution::zero(instance.num_projects()));
      }
      emit(to_json(instance, empty));
      return ok;
    }
    const auto result = solve_nash(instance, solver());
    emit(to_json(instance, proportional_decomposition(instance, result.distribution)));
    return ok;
  }

  std::vector<std::size_t> resolve_agents(const Instance& instance,
                                          const std::vector<std::string>& names) const {
    std::vector<std::size_t> out;
    for (const auto& name : names) {
      std::size_t k = 0;
      while (k < instance.num_agents() && instance.agents[k].name != name) ++k;
      if (k == instance.num_agents()) {
        throw Error(ErrorKind::InvalidValue, "unknown agent '" + name + "'");
      }
      out.push_back(k);
    }
    return out;
  }

  Distribution target_distribution(const Instance& instance, MechanismId mechanism) const {
    if (!config_.distribution.empty()) {
      return distribution_from_json(instance, read_json_file(config_.distribution));
    }
    return run_mechanism(mechanism, instance, solver());
  }

  /// All reports for one instance.
  std::vector<AxiomReport> check_instance(const Instance& instance) const {
    const MechanismId mechanism = parse_mechanism(config_.mechanism);
    const double tol = config_.tol.value_or(default_axiom_tolerance);
    std::vector<std::size_t> agents = resolve_agents(instance, config_.agents);
    if (agents.empty()) {
      for (std::size_t i = 0; i < instance.num_agents(); ++i) agents.push_back(i);
    }
    const std::string& axiom = config_.axiom;
    std::vector<AxiomReport> reports;
    if (axiom == "efficiency") {
      reports.push_back(check_efficiency(instance, target_distribution(instance, mechanism),
                                         config_.tol));
    } else if (axiom == "decomposability") {
      reports.push_back(check_decomposability(
          instance, target_distribution(instance, mechanism), config_.strong));
    } else if (axiom == "cic" || axiom == "strong_cic") {
      const bool strong = config_.strong || axiom == "strong_cic";
      for (std::size_t i : agents) {
        reports.push_back(strong ? check_strong_cic(mechanism, instance, i, tol, false,
                                                    config_.grid, solver())
                                 : check_cic(mechanism, instance, i, config_.grid, tol, solver()));
      }
    } else if (axiom == "conjectured_cic") {
      for (std::size_t i : agents) {
        if (instance.agents[i].contribution <= 0.0) continue;
        reports.push_back(check_conjectured_cic(instance, i, config_.epsilons, tol, solver()));
      }
    } else if (axiom == "core_share") {
      auto group = resolve_agents(instance, config_.group);
      if (group.empty()) group = agents;
      reports.push_back(check_core_share(instance, group, tol, std::nullopt, solver()));
    } else {
      throw Error(ErrorKind::InvalidValue, "unknown axiom '" + axiom + "'");
    }
    return reports;
  }

  int check() {
    if (config_.random > 0) return check_suite();
    const Instance instance = load_instance();
    const auto reports = check_instance(instance);
    bool holds = true;
    json j = json::array();
    for (const auto& r : reports) {
      holds = holds && r.holds;
      j.push_back(to_json(instance, r));
    }
    emit(j.size() == 1 ? j[0] : j);
    return holds ? ok : violated;
  }

  int check_suite() {
    RandomInstanceConfig bounds;
    bounds.max_agents = config_.max_agents;
    bounds.max_projects = config_.max_projects;
    std::mt19937_64 rng(config_.seed);
    json failures = json::array();
    std::size_t points = 0;
    for (std::size_t k = 0; k < config_.random; ++k) {
      const Instance instance = random_instance(rng, bounds);
      for (const auto& r : check_instance(instance)) {
        points += r.tested_points;
        if (!r.holds) failures.push_back({{"instance", to_json(instance)},
                                          {"report", to_json(instance, r)}});
      }
    }
    emit({{"axiom", config_.axiom},
          {"mechanism", config_.mechanism},
          {"seed", config_.seed},
          {"instances", config_.random},
          {"tested_points", points},
          {"verdict", failures.empty() ? "holds" : "violated"},
          {"failures", failures}});
    return failures.empty() ? ok : violated;
  }

  int compare() {
    const Instance instance = load_instance();
    std::vector<MechanismId> ids;
    if (config_.mechanisms.empty()) {
      ids.assign(all_mechanisms.begin(), all_mechanisms.end());
    } else {
      for (const auto& name : config_.mechanisms) ids.push_back(parse_mechanism(name));
    }
    std::ostringstream table;
    table << "mechanism\tspend\tutilities\tdecomposable\tefficient\n";
    for (MechanismId id : ids) {
      table << to_string(id) << '\t';
      Distribution d;
      try {
        d = run_mechanism(id, instance, solver());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedInstance) throw;
        table << "unsupported\t-\t-\t-\n";
        continue;
      }
      for (std::size_t x = 0; x < d.spend.size(); ++x) {
        table << (x ? " + " : "") << num(d.spend[x]) << ' ' << instance.projects[x];
      }
      table << '\t';
      const auto u = utilities_of(instance, d);
      for (std::size_t i = 0; i < u.size(); ++i) table << (i ? ", " : "") << num(u[i]);
      table << '\t' << (check_decomposable(instance, d).decomposable ? "true" : "false");
      table << '\t' << (check_efficiency(instance, d).holds ? "true" : "false") << '\n';
    }
    if (config_.output.empty()) {
      out_ << table.str();
    } else {
      write_text_file(config_.output, table.str());
    }
    return ok;
  }

  int examples() {
    const auto all = reference_examples();
    if (config_.list) {
      for (const auto& ex : all) out_ << ex.name << "\t" << ex.description << "\n";
      return ok;
    }
    std::vector<const ReferenceExample*> chosen;
    for (const auto& name : config_.fixtures) {
      const ReferenceExample* found = nullptr;
      for (const auto& ex : all) {
        if (ex.name == name) found = &ex;
      }
      if (!found) {
        err_ << "error: unknown fixture '" << name << "'\n";
        return input_error;
      }
      chosen.push_back(found);
    }
    if (chosen.empty()) {
      for (const auto& ex : all) chosen.push_back(&ex);
    }
    std::size_t failed = 0, total = 0;
    for (const auto* ex : chosen) {
      for (const auto& e : ex->run(solver())) {
        ++total;
        failed += !e.passed;
        out_ << (e.passed ? "PASS " : "FAIL ") << ex->name << ": " << e.name;
        if (!e.detail.empty()) out_ << " [" << e.detail << "]";
        out_ << "\n";
      }
    }
    out_ << (total - failed) << "/" << total << " expectations passed\n";
    return failed == 0 ? ok : violated;
  }

 private:
  const CliConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nash product funding of public projects: solve, decompose, check axioms"};
  app.require_subcommand(1);
  CliConfig config;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--eps", config.eps, "Cover gap target")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", config.max_iters, "iteration limit")
        ->check(CLI::Range(1L, std::numeric_limits<long>::max()));
  };

  auto* solve = app.add_subcommand("solve", "compute the Nash distribution");
  solve->add_option("--input", config.input, "instance JSON")->required();
  solve->add_option("--output", config.output, "distribution JSON (default stdout)");
  solve->add_option("--trace", config.trace, "write the iteration trace as CSV");
  add_solver_flags(solve);

  auto* decompose = app.add_subcommand("decompose", "split the Nash distribution per agent");
  decompose->add_option("--input", config.input, "instance JSON")->required();
  decompose->add_option("--output", config.output, "decomposition JSON (default stdout)");
  add_solver_flags(decompose);

  auto* check = app.add_subcommand("check", "verify an axiom; exit 0 iff it holds");
  check->add_option("--input", config.input, "instance JSON");
  check->add_option("--output", config.output, "report JSON (default stdout)");
  check->add_option("--axiom", config.axiom,
                    "efficiency | decomposability | cic | strong_cic | conjectured_cic | core_share");
  check->add_option("--mechanism", config.mechanism, "mechanism under test");
  check->add_option("--distribution", config.distribution,
                    "distribution JSON to check instead of the mechanism output");
  check->add_option("--agent", config.agents, "agent name(s); default all");
  check->add_option("--group", config.group, "agent names for core_share");
  check->add_option("--epsilons", config.epsilons, "extra contributions for conjectured_cic")
      ->delimiter(',');
  check->add_option("--grid", config.grid, "CIC grid points")->check(CLI::Range(2, 100000));
  check->add_option("--tol", config.tol, "tolerance override");
  check->add_flag("--strong", config.strong, "strong decomposability / strong CIC");
  check->add_option("--seed", config.seed, "seed for --random");
  check->add_option("--random", config.random, "check this many seeded random instances");
  check->add_option("--max-agents", config.max_agents, "random instance bound")
      ->check(CLI::Range(1, 20));
  check->add_option("--max-projects", config.max_projects, "random instance bound")
      ->check(CLI::Range(1, 60));
  add_solver_flags(check);

  auto* compare = app.add_subcommand("compare", "tabulate mechanisms on one instance");
  compare->add_option("--input", config.input, "instance JSON")->required();
  compare->add_option("--output", config.output, "table (default stdout)");
  compare->add_option("--mechanisms", config.mechanisms, "comma-separated mechanism ids")
      ->delimiter(',');
  add_solver_flags(compare);

  auto* examples = app.add_subcommand("examples", "run the built-in reference instances");
  examples->add_flag("--list", config.list, "list fixture names");
  examples->add_option("fixtures", config.fixtures, "fixture names (default all)");
  add_solver_flags(examples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }

  Runner runner(config, out, err);
  try {
    if (*solve) return runner.solve();
    if (*decompose) return runner.decompose();
    if (*check) return runner.check();
    if (*compare) return runner.compare();
    return runner.examples();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace nashfund::cli
