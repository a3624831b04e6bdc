#include <cmath>
#include <vector>

#include "doctest.h"

#include "d2dsim/femto.hpp"
#include "d2dsim/request_model.hpp"
#include "d2dsim/rng.hpp"

using namespace d2dsim;

namespace {

// every integer placement with at most capacity[h] files per helper
double exhaustive_best_delay(const FemtoInstance& inst) {
  std::vector<std::vector<int>> choices;  // per helper, bitmasks over files
  for (int h = 0; h < inst.n_helpers; ++h) {
    std::vector<int> ok;
    for (int mask = 0; mask < (1 << inst.n_files); ++mask)
      if (__builtin_popcount(static_cast<unsigned>(mask)) <= inst.capacity[h]) ok.push_back(mask);
    choices.push_back(ok);
  }
  std::vector<std::vector<double>> x(inst.n_helpers, std::vector<double>(inst.n_files, 0.0));
  double best = bs_only_delay(inst);
  std::vector<std::size_t> idx(inst.n_helpers, 0);
  for (;;) {
    for (int h = 0; h < inst.n_helpers; ++h) {
      int mask = choices[h][idx[h]];
      for (int f = 0; f < inst.n_files; ++f) x[h][f] = (mask >> f) & 1 ? 1.0 : 0.0;
    }
    best = std::min(best, expected_delay(inst, x));
    int h = 0;
    while (h < inst.n_helpers && ++idx[h] == choices[h].size()) idx[h++] = 0;
    if (h == inst.n_helpers) break;
  }
  return best;
}

FemtoInstance random_instance(Rng& rng) {
  FemtoInstance inst;
  inst.n_users = 2 + static_cast<int>(rng.next_below(3));
  inst.n_helpers = 1 + static_cast<int>(rng.next_below(3));
  inst.n_files = 2 + static_cast<int>(rng.next_below(5));
  inst.file_pmf = zipf_pmf(inst.n_files, 0.2 + rng.next_double());
  inst.bs_rate.assign(inst.n_users, 0.0);
  for (double& r : inst.bs_rate) r = 0.2 + 0.6 * rng.next_double();
  inst.capacity.assign(inst.n_helpers, 0);
  for (int& c : inst.capacity) c = 1 + static_cast<int>(rng.next_below(2));
  inst.helper_rate.assign(inst.n_helpers, std::vector<double>(inst.n_users, 0.0));
  for (auto& row : inst.helper_rate)
    for (double& r : row) {
      double v = 0.5 + 3.5 * rng.next_double();
      r = rng.next_double() < 0.7 ? v : 0.0;
    }
  return inst;
}

}  // namespace

TEST_CASE("hand-checkable single-link instance") {
  FemtoInstance inst;
  inst.n_users = 1;
  inst.n_helpers = 1;
  inst.n_files = 2;
  inst.file_pmf = {0.75, 0.25};
  inst.helper_rate = {{2.0}};
  inst.bs_rate = {0.5};
  inst.capacity = {1};

  CHECK(bs_only_delay(inst) == doctest::Approx(2.0).epsilon(1e-12));

  Placement g = greedy_uncoded_placement(inst);
  CHECK(g.x[0][0] == doctest::Approx(1.0));
  CHECK(g.x[0][1] == doctest::Approx(0.0));
  CHECK(g.expected_delay == doctest::Approx(0.75 * 0.5 + 0.25 * 2.0).epsilon(1e-12));
  CHECK(g.saving == doctest::Approx(2.0 - 0.875).epsilon(1e-12));
  CHECK(g.iterations == 1);

  // fractional cache entry splits service between helper and base station
  std::vector<std::vector<double>> frac = {{0.5, 0.0}};
  CHECK(expected_delay(inst, frac) ==
        doctest::Approx(0.75 * (0.5 / 2.0 + 0.5 / 0.5) + 0.25 * 2.0).epsilon(1e-12));
}

TEST_CASE("helpers slower than the base station are ignored") {
  FemtoInstance inst;
  inst.n_users = 1;
  inst.n_helpers = 1;
  inst.n_files = 1;
  inst.file_pmf = {1.0};
  inst.helper_rate = {{0.3}};
  inst.bs_rate = {1.0};
  inst.capacity = {1};
  std::vector<std::vector<double>> full = {{1.0}};
  CHECK(expected_delay(inst, full) == doctest::Approx(1.0).epsilon(1e-12));
  Placement g = greedy_uncoded_placement(inst);
  CHECK(g.saving == doctest::Approx(0.0));
}

TEST_CASE("two helpers split the head of the library for a shared user") {
  // user 2 reaches both helpers; equal rates; capacity 1 each
  FemtoInstance inst;
  inst.n_users = 3;
  inst.n_helpers = 2;
  inst.n_files = 4;
  inst.file_pmf = zipf_pmf(4, 0.6);
  inst.helper_rate = {{2.0, 0.0, 2.0}, {0.0, 2.0, 2.0}};
  inst.bs_rate = {0.5, 0.5, 0.5};
  inst.capacity = {1, 1};

  Placement g = greedy_uncoded_placement(inst);
  CHECK(g.x[0][0] == doctest::Approx(1.0));
  CHECK(g.x[1][1] == doctest::Approx(1.0));
}

TEST_CASE("zero capacity degenerates to base-station service") {
  FemtoInstance inst;
  inst.n_users = 2;
  inst.n_helpers = 1;
  inst.n_files = 3;
  inst.file_pmf = zipf_pmf(3, 0.5);
  inst.helper_rate = {{1.0, 1.0}};
  inst.bs_rate = {0.5, 0.5};
  inst.capacity = {0};
  Placement g = greedy_uncoded_placement(inst);
  CHECK(g.expected_delay == doctest::Approx(bs_only_delay(inst)).epsilon(1e-12));
  CHECK(g.saving == doctest::Approx(0.0));
  CHECK(g.iterations == 0);
}

TEST_CASE("greedy stays within half of the exhaustive optimum") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(trial));
    FemtoInstance inst = random_instance(sub);
    double bs = bs_only_delay(inst);
    double best = exhaustive_best_delay(inst);
    Placement g = greedy_uncoded_placement(inst);
    CHECK(g.expected_delay <= bs + 1e-12);
    double opt_saving = bs - best;
    CHECK(g.saving + 1e-12 >= 0.5 * opt_saving);
    // greedy marginal gains shrink along the run (submodularity witness)
  }
}

TEST_CASE("coded relaxation never loses to any integer placement") {
  Rng rng(72);
  for (int trial = 0; trial < 6; ++trial) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(trial));
    FemtoInstance inst = random_instance(sub);
    double best = exhaustive_best_delay(inst);
    Placement c = coded_placement(inst);
    REQUIRE(c.converged);
    CHECK(c.expected_delay <= best + 1e-9);
    // capacity respected, entries in range
    for (int h = 0; h < inst.n_helpers; ++h) {
      double tot = 0.0;
      for (double v : c.x[h]) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
        tot += v;
      }
      CHECK(tot <= inst.capacity[h] + 1e-9);
    }
  }
}

TEST_CASE("single-helper coded solution is integral") {
  FemtoInstance inst;
  inst.n_users = 2;
  inst.n_helpers = 1;
  inst.n_files = 3;
  inst.file_pmf = zipf_pmf(3, 0.8);
  inst.helper_rate = {{3.0, 2.0}};
  inst.bs_rate = {0.5, 0.5};
  inst.capacity = {2};
  Placement c = coded_placement(inst);
  Placement g = greedy_uncoded_placement(inst);
  REQUIRE(c.converged);
  CHECK(c.expected_delay == doctest::Approx(g.expected_delay).epsilon(1e-9));
}

TEST_CASE("placement csv lists only positive fractions") {
  Placement p;
  p.x = {{1.0, 0.0}, {0.0, 0.5}};
  std::string csv = placement_csv(p);
  CHECK(csv == "helper_id,file_id,fraction\n0,0,1\n1,1,0.5\n");
}
