#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nashfund/axioms.hpp"
#include "nashfund/decomposition.hpp"
#include "nashfund/error.hpp"
#include "nashfund/model.hpp"
#include "nashfund/solver.hpp"

namespace nashfund {

using nlohmann::json;

namespace detail {

template <class F>
auto wrap_json(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidValue, std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

/// Parses the instance schema. Utilities are taken as given; call
/// validate_and_normalize before solving.
inline Instance instance_from_json(const json& j) {
  return detail::wrap_json("instance", [&] {
    Instance instance;
    instance.projects = j.at("projects").get<std::vector<std::string>>();
    for (const auto& a : j.at("agents")) {
      Agent agent;
      agent.name = a.at("name").get<std::string>();
      agent.budget = a.at("budget").get<double>();
      agent.contribution = a.at("contribution").get<double>();
      const auto& u = a.at("utilities");
      if (!u.is_object()) {
        throw Error(ErrorKind::InvalidValue, "utilities of agent '" + agent.name + "' must be an object");
      }
      for (const auto& [key, _] : u.items()) project_index(instance, key);
      for (const auto& project : instance.projects) {
        if (!u.contains(project)) {
          throw Error(ErrorKind::ProjectMismatch,
                      "agent '" + agent.name + "' gives no utility for project '" + project + "'");
        }
        agent.utilities.push_back(u.at(project).get<double>());
      }
      instance.agents.push_back(std::move(agent));
    }
    return instance;
  });
}

inline json to_json(const Instance& instance) {
  json agents = json::array();
  for (const auto& agent : instance.agents) {
    json u = json::object();
    for (std::size_t x = 0; x < instance.num_projects(); ++x) {
      u[instance.projects[x]] = agent.utilities[x];
    }
    agents.push_back({{"name", agent.name},
                      {"budget", agent.budget},
                      {"contribution", agent.contribution},
                      {"utilities", u}});
  }
  return {{"projects", instance.projects}, {"agents", agents}};
}

/// Projects missing from "spend" get 0; "total" defaults to the spend sum.
inline Distribution distribution_from_json(const Instance& instance, const json& j) {
  return detail::wrap_json("distribution", [&] {
    Distribution d = Distribution::zero(instance.num_projects());
    for (const auto& [key, value] : j.at("spend").items()) {
      d.spend[project_index(instance, key)] = value.get<double>();
    }
    double sum = 0.0;
    for (double v : d.spend) sum += v;
    d.total = j.contains("total") ? j.at("total").get<double>() : sum;
    check_distribution(instance, d);
    return d;
  });
}

inline json to_json(const Instance& instance, const Distribution& delta) {
  json spend = json::object();
  for (std::size_t x = 0; x < instance.num_projects(); ++x) {
    spend[instance.projects[x]] = delta.spend[x];
  }
  return {{"total", delta.total}, {"spend", spend}};
}

inline json to_json(const Instance& instance, const Decomposition& d) {
  json parts = json::object();
  for (std::size_t i = 0; i < d.parts.size(); ++i) {
    parts[instance.agents[i].name] = to_json(instance, d.parts[i]);
  }
  return {{"parts", parts}};
}

inline json agent_names(const Instance& instance, const std::vector<std::size_t>& agents) {
  json names = json::array();
  for (std::size_t i : agents) names.push_back(instance.agents[i].name);
  return names;
}

inline json to_json(const Instance& instance, const SubsetWitness& w) {
  return {{"agents", agent_names(instance, w.agent_subset)},
          {"covered_spend", w.covered_spend},
          {"required", w.required}};
}

inline json to_json(const Instance& instance, const KktReport& kkt) {
  json stationarity = json::object();
  json residual = json::object();
  for (std::size_t x = 0; x < instance.num_projects(); ++x) {
    stationarity[instance.projects[x]] = kkt.stationarity[x];
    residual[instance.projects[x]] = kkt.residual[x];
  }
  return {{"lambda_estimate", kkt.lambda_estimate},
          {"stationarity", stationarity},
          {"residual", residual},
          {"max_residual", kkt.max_residual}};
}

inline json witness_to_json(const Instance& instance, const Witness& witness) {
  return std::visit(
      [&](const auto& w) -> json {
        using W = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<W, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<W, EfficiencyWitness>) {
          return {{"dominating", to_json(instance, w.dominating)},
                  {"utilities_before", w.utilities_before},
                  {"utilities_after", w.utilities_after},
                  {"total_gain", w.total_gain}};
        } else if constexpr (std::is_same_v<W, CicWitness>) {
          return {{"agent", instance.agents[w.agent].name},
                  {"contribution", w.contribution},
                  {"deviation", w.deviation},
                  {"lhs", w.lhs},
                  {"rhs", w.rhs}};
        } else if constexpr (std::is_same_v<W, CoreWitness>) {
          return {{"group", agent_names(instance, w.group)},
                  {"spend", w.spend},
                  {"required", w.required}};
        } else {
          return to_json(instance, w);
        }
      },
      witness);
}

inline json to_json(const Instance& instance, const AxiomReport& report) {
  json j = {{"axiom", report.axiom},
            {"verdict", report.holds ? "holds" : "violated"},
            {"witness", witness_to_json(instance, report.witness)},
            {"tested_points", report.tested_points},
            {"tolerance", report.tolerance}};
  if (!report.samples.empty()) {
    json samples = json::array();
    for (const auto& s : report.samples) {
      samples.push_back({{"contribution", s.contribution}, {"utility", s.utility}, {"net", s.net}});
    }
    j["samples"] = samples;
  }
  if (!report.conjecture.empty()) {
    json points = json::array();
    for (const auto& p : report.conjecture) {
      points.push_back({{"epsilon", p.epsilon}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"holds", p.holds}});
    }
    j["conjecture"] = points;
  }
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidValue, "cannot open '" + path + "'");
  return detail::wrap_json(path.c_str(), [&] { return json::parse(in); });
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidValue, "cannot write '" + path + "'");
  out << text;
}

/// Trace CSV with 17 significant digits.
inline std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iter,log_nash,gap_bound,step_l1\n";
  for (const auto& row : trace) {
    out << row.iter << ',' << row.log_nash << ',' << row.gap_bound << ',' << row.step_l1 << '\n';
  }
  return out.str();
}

}  // namespace nashfund
