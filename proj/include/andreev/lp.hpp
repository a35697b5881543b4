#pragma once

// Exact dense simplex for  maximize c.x  subject to  A x <= b, x >= 0, b >= 0.
// The origin is feasible, so a single phase suffices. Bland's rule prevents
// cycling.

#include <cstddef>
#include <vector>

#include "andreev/error.hpp"
#include "andreev/rational.hpp"

namespace andreev::lp {

struct Problem {
  std::vector<std::vector<Rational>> a;  // rows x cols
  std::vector<Rational> b;               // >= 0
  std::vector<Rational> c;
};

enum class Status { Optimal, Unbounded };

struct Solution {
  Status status = Status::Optimal;
  Rational objective;
  std::vector<Rational> x;
  long pivots = 0;
};

inline Solution maximize(const Problem& p) {
  const size_t m = p.a.size();
  const size_t n = p.c.size();
  if (p.b.size() != m) fail(ErrorCode::SizeMismatch, "rhs length differs from row count");
  for (const auto& row : p.a)
    if (row.size() != n) fail(ErrorCode::SizeMismatch, "constraint row length differs from objective length");
  for (const auto& bi : p.b)
    if (bi < 0) fail(ErrorCode::InvalidInput, "negative right-hand side");

  // Columns 0..n-1 original, n..n+m-1 slacks.
  const size_t cols = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = p.a[i][j];
    t[i][n + i] = 1;
    t[i][cols] = p.b[i];
  }
  // Reduced costs: z_j - c_j stored negated as "gain" per unit of column j.
  std::vector<Rational> gain(cols + 1);
  for (size_t j = 0; j < n; ++j) gain[j] = p.c[j];
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  Solution sol;
  for (;;) {
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j)
      if (sgn(gain[j]) > 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    size_t leave = m;
    Rational best;
    for (size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      sol.status = Status::Unbounded;
      return sol;
    }
    // Pivot.
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      Rational f = t[i][enter];
      for (size_t j = 0; j <= cols; ++j)
        if (sgn(t[leave][j]) != 0) t[i][j] -= f * t[leave][j];
    }
    if (sgn(gain[enter]) != 0) {
      Rational f = gain[enter];
      for (size_t j = 0; j <= cols; ++j)
        if (sgn(t[leave][j]) != 0) gain[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
    ++sol.pivots;
  }
  sol.x.assign(n, Rational(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = t[i][cols];
  sol.objective = 0;
  for (size_t j = 0; j < n; ++j) sol.objective += p.c[j] * sol.x[j];
  return sol;
}

}  // namespace andreev::lp
