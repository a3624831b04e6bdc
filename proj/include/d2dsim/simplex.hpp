#pragma once

#include <vector>

namespace d2dsim {

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  bool optimal = false;  // reduced costs all <= tol within the pivot budget
  int pivots = 0;
};

// maximize c.x  s.t.  A x <= b, x >= 0, with b >= 0 so the all-slack basis is
// feasible (no phase 1).  Dense tableau, Bland's rule, intended for the small
// placement programs this project generates.
LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, const std::vector<double>& c,
                          int max_pivots = 100000, double tol = 1e-9);

}  // namespace d2dsim
