#pragma once

#include <string>
#include <vector>

namespace d2dsim {

// Helper-assisted download instance.  Rates are average link rates in file
// units per second (filesize normalized to 1); helper_rate[h][u] = 0 means
// helper h is out of range of user u.  The base station reaches everyone.
struct FemtoInstance {
  int n_users = 0;
  int n_helpers = 0;
  int n_files = 0;
  std::vector<double> file_pmf;                  // rank-sorted request popularity
  std::vector<std::vector<double>> helper_rate;  // [helper][user]
  std::vector<double> bs_rate;                   // [user], > 0
  std::vector<int> capacity;                     // [helper] cache slots M_h

  void validate() const;
};

struct Placement {
  std::vector<std::vector<double>> x;  // [helper][file], uncoded entries in {0,1}
  double expected_delay = 0.0;         // sum_u sum_f pmf(f) * delay(u,f)
  double saving = 0.0;                 // bs_only_delay - expected_delay
  bool converged = true;
  int iterations = 0;
};

// Expected download delay under the placement: each user fetches every file
// fraction-by-fraction from its reachable helpers in decreasing-rate order
// (only helpers faster than its BS link help), remainder from the BS.
// Integer placements reduce to best-single-helper-else-BS service.
double expected_delay(const FemtoInstance& inst, const std::vector<std::vector<double>>& x);

double bs_only_delay(const FemtoInstance& inst);

// Greedy file-by-file placement: repeatedly add the (helper, file) element
// with the largest delay saving until every helper is full or no element
// strictly helps.  The saving is monotone submodular and per-helper capacity
// is a partition matroid, so this is within 1/2 of the integer optimum.
Placement greedy_uncoded_placement(const FemtoInstance& inst);

// Fractional relaxation: files are rateless-coded so a user can combine
// distinct coded fractions x[h][f] from several helpers.  Solved exactly as a
// linear program (see simplex.hpp); `iterations` caps pivots and `tolerance`
// is the reduced-cost optimality threshold.  The optimum is always <= any
// integer placement's delay since those are feasible points.
Placement coded_placement(const FemtoInstance& inst, int iterations = 100000,
                          double tolerance = 1e-9);

// helper_id,file_id,fraction (zero entries omitted)
std::string placement_csv(const Placement& p);

}  // namespace d2dsim
