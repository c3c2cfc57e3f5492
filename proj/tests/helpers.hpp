#pragma once

#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nashfund/nashfund.hpp"

namespace nashfund::testing {

/// Raw (unnormalized) instance with projects a, b, c, ... and agents 1..n.
inline Instance raw_instance(const std::vector<std::vector<double>>& utilities,
                             const std::vector<double>& contributions) {
  Instance inst;
  for (std::size_t x = 0; x < utilities.front().size(); ++x) {
    inst.projects.push_back(project_name(x));
  }
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    Agent a;
    a.name = std::to_string(i + 1);
    a.contribution = contributions[i];
    a.budget = std::max(1.0, contributions[i]);
    a.utilities = utilities[i];
    inst.agents.push_back(std::move(a));
  }
  return inst;
}

inline Instance instance(const std::vector<std::vector<double>>& utilities,
                         const std::vector<double>& contributions) {
  return validate_and_normalize(raw_instance(utilities, contributions));
}

inline ::testing::AssertionResult throws_kind(const std::function<void()>& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "threw " << to_string(e.kind()) << ": " << e.what();
  } catch (const std::exception& e) {
    return ::testing::AssertionFailure() << "threw a non-library exception: " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw";
}

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace nashfund::testing
