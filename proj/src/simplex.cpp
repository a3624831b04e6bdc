#include "d2dsim/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace d2dsim {

LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, const std::vector<double>& c,
                          int max_pivots, double tol) {
  std::size_t m = A.size();
  std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("simplex: |b| != rows");
  for (const auto& row : A)
    if (row.size() != n) throw std::invalid_argument("simplex: ragged A");
  for (double bi : b)
    if (bi < 0.0) throw std::invalid_argument("simplex: b must be >= 0");

  // tableau: m rows of [A | I | b], objective row holds reduced costs
  std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
  }
  std::vector<double> obj(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  LpResult res;
  while (res.pivots < max_pivots) {
    // Bland: lowest-index column with positive reduced cost
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (obj[j] > tol) {
        enter = j;
        break;
      }
    }
    if (enter == cols) {
      res.optimal = true;
      break;
    }
    // ratio test, ties to the lowest basis index (anti-cycling)
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > tol) {
        double ratio = t[i][cols - 1] / t[i][enter];
        if (ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("simplex: unbounded program");

    double piv = t[leave][enter];
    for (std::size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    double f = obj[enter];
    for (std::size_t j = 0; j < cols; ++j) obj[j] -= f * t[leave][j];
    basis[leave] = enter;
    ++res.pivots;
  }

  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace d2dsim
