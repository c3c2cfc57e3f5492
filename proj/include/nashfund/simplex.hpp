#pragma once

#include <cstddef>
#include <vector>

#include "nashfund/error.hpp"

namespace nashfund {

enum class Relation { less_equal, equal, greater_equal };

/// maximize objective . x  subject to  rows[k] . x (relation) rhs[k],  x >= 0.
template <class T>
struct LinearProgram {
  std::vector<T> objective;
  std::vector<std::vector<T>> rows;
  std::vector<Relation> relations;
  std::vector<T> rhs;

  void add_constraint(std::vector<T> row, Relation relation, T bound) {
    rows.push_back(std::move(row));
    relations.push_back(relation);
    rhs.push_back(std::move(bound));
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  T value{};
  std::vector<T> x;
};

/**
 * Dense two-phase tableau simplex with Bland's rule. With an exact scalar type
 * pass eps = 0; with double pass a small positive eps used for every sign test.
 * Bland's rule guarantees termination in exact arithmetic.
 */
template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp, const T& eps) {
  const std::size_t rows = lp.rows.size();
  const std::size_t vars = lp.objective.size();
  for (const auto& row : lp.rows) {
    if (row.size() != vars) throw Error(ErrorKind::LpFailure, "constraint width mismatch");
  }

  // Columns: originals | one slack per inequality | one artificial per row | rhs.
  std::size_t slacks = 0;
  for (Relation r : lp.relations) slacks += r != Relation::equal;
  const std::size_t first_slack = vars;
  const std::size_t first_art = vars + slacks;
  const std::size_t cols = first_art + rows;
  const std::size_t rhs_col = cols;

  std::vector<std::vector<T>> tab(rows, std::vector<T>(cols + 1, T(0)));
  std::vector<std::size_t> basis(rows);
  std::size_t next_slack = first_slack;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < vars; ++j) tab[r][j] = lp.rows[r][j];
    tab[r][rhs_col] = lp.rhs[r];
    if (lp.relations[r] == Relation::less_equal) tab[r][next_slack++] = T(1);
    if (lp.relations[r] == Relation::greater_equal) tab[r][next_slack++] = T(-1);
    if (tab[r][rhs_col] < T(0)) {
      for (auto& v : tab[r]) v = -v;
    }
    tab[r][first_art + r] = T(1);
    basis[r] = first_art + r;
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const T p = tab[pr][pc];
    for (auto& v : tab[pr]) v /= p;
    for (std::size_t r = 0; r < tab.size(); ++r) {
      if (r == pr || tab[r][pc] == T(0)) continue;
      const T f = tab[r][pc];
      for (std::size_t j = 0; j <= cols; ++j) tab[r][j] -= f * tab[pr][j];
    }
    basis[pr] = pc;
  };

  // Runs the simplex for `cost` over columns [0, allowed_cols). Returns false
  // when unbounded.
  auto optimize = [&](const std::vector<T>& cost, std::size_t allowed_cols) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed_cols && enter == cols; ++j) {
        T reduced = cost[j];
        for (std::size_t r = 0; r < tab.size(); ++r) reduced -= cost[basis[r]] * tab[r][j];
        if (reduced > eps) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = tab.size();
      T best{};
      for (std::size_t r = 0; r < tab.size(); ++r) {
        if (!(tab[r][enter] > eps)) continue;
        const T ratio = tab[r][rhs_col] / tab[r][enter];
        if (leave == tab.size() || ratio < best ||
            (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == tab.size()) return false;
      pivot(leave, enter);
    }
  };

  std::vector<T> phase1(cols, T(0));
  for (std::size_t j = first_art; j < cols; ++j) phase1[j] = T(-1);
  optimize(phase1, cols);

  T infeasibility(0);
  for (std::size_t r = 0; r < tab.size(); ++r) {
    if (basis[r] >= first_art) infeasibility += tab[r][rhs_col];
  }
  LpSolution<T> out;
  if (infeasibility > eps) return out;

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < tab.size();) {
    if (basis[r] < first_art) {
      ++r;
      continue;
    }
    std::size_t col = first_art;
    for (std::size_t j = 0; j < first_art; ++j) {
      if (tab[r][j] > eps || tab[r][j] < -eps) {
        col = j;
        break;
      }
    }
    if (col == first_art) {
      tab.erase(tab.begin() + static_cast<std::ptrdiff_t>(r));
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
      continue;
    }
    pivot(r, col);
    ++r;
  }

  std::vector<T> phase2(cols, T(0));
  for (std::size_t j = 0; j < vars; ++j) phase2[j] = lp.objective[j];
  if (!optimize(phase2, first_art)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.x.assign(vars, T(0));
  for (std::size_t r = 0; r < tab.size(); ++r) {
    if (basis[r] < vars) out.x[basis[r]] = tab[r][rhs_col];
  }
  out.value = T(0);
  for (std::size_t j = 0; j < vars; ++j) out.value += lp.objective[j] * out.x[j];
  return out;
}

}  // namespace nashfund
