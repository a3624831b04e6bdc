#include "d2dsim/femto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dsim/csv.hpp"
#include "d2dsim/simplex.hpp"

namespace d2dsim {

void FemtoInstance::validate() const {
  if (n_users < 1 || n_helpers < 1 || n_files < 1)
    throw std::invalid_argument("FemtoInstance: empty dimension");
  if (static_cast<int>(file_pmf.size()) != n_files ||
      static_cast<int>(helper_rate.size()) != n_helpers ||
      static_cast<int>(bs_rate.size()) != n_users ||
      static_cast<int>(capacity.size()) != n_helpers)
    throw std::invalid_argument("FemtoInstance: size mismatch");
  for (const auto& row : helper_rate)
    if (static_cast<int>(row.size()) != n_users)
      throw std::invalid_argument("FemtoInstance: helper_rate row size");
  for (double r : bs_rate)
    if (!(r > 0.0)) throw std::invalid_argument("FemtoInstance: bs_rate must be > 0");
  for (int cap : capacity)
    if (cap < 0) throw std::invalid_argument("FemtoInstance: negative capacity");
}

namespace {

// per-user helper order, fastest first, only helpers beating the BS link
std::vector<std::vector<int>> useful_helpers(const FemtoInstance& inst) {
  std::vector<std::vector<int>> order(static_cast<std::size_t>(inst.n_users));
  for (int u = 0; u < inst.n_users; ++u) {
    auto& ord = order[static_cast<std::size_t>(u)];
    for (int h = 0; h < inst.n_helpers; ++h) {
      if (inst.helper_rate[h][u] > inst.bs_rate[u]) ord.push_back(h);
    }
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
      return inst.helper_rate[a][u] > inst.helper_rate[b][u];
    });
  }
  return order;
}

}  // namespace

double expected_delay(const FemtoInstance& inst, const std::vector<std::vector<double>>& x) {
  inst.validate();
  auto order = useful_helpers(inst);
  double total = 0.0;
  for (int u = 0; u < inst.n_users; ++u) {
    for (int f = 0; f < inst.n_files; ++f) {
      double remaining = 1.0;
      double delay = 0.0;
      for (int h : order[static_cast<std::size_t>(u)]) {
        if (remaining <= 0.0) break;
        double take = std::min(x[h][f], remaining);
        if (take <= 0.0) continue;
        delay += take / inst.helper_rate[h][u];
        remaining -= take;
      }
      if (remaining > 0.0) delay += remaining / inst.bs_rate[u];
      total += inst.file_pmf[f] * delay;
    }
  }
  return total;
}

double bs_only_delay(const FemtoInstance& inst) {
  inst.validate();
  double total = 0.0;
  for (int u = 0; u < inst.n_users; ++u) {
    for (int f = 0; f < inst.n_files; ++f) total += inst.file_pmf[f] / inst.bs_rate[u];
  }
  return total;
}

Placement greedy_uncoded_placement(const FemtoInstance& inst) {
  inst.validate();
  Placement p;
  p.x.assign(static_cast<std::size_t>(inst.n_helpers),
             std::vector<double>(static_cast<std::size_t>(inst.n_files), 0.0));
  std::vector<int> used(static_cast<std::size_t>(inst.n_helpers), 0);
  double current = expected_delay(inst, p.x);

  for (;;) {
    int best_h = -1, best_f = -1;
    double best_delay = current;
    for (int h = 0; h < inst.n_helpers; ++h) {
      if (used[static_cast<std::size_t>(h)] >= inst.capacity[static_cast<std::size_t>(h)]) continue;
      for (int f = 0; f < inst.n_files; ++f) {
        if (p.x[h][f] > 0.0) continue;
        p.x[h][f] = 1.0;
        double d = expected_delay(inst, p.x);
        p.x[h][f] = 0.0;
        if (d < best_delay - 1e-15) {  // strict improvement; ties keep lowest (h,f)
          best_delay = d;
          best_h = h;
          best_f = f;
        }
      }
    }
    if (best_h < 0) break;
    p.x[best_h][best_f] = 1.0;
    ++used[static_cast<std::size_t>(best_h)];
    current = best_delay;
    ++p.iterations;
  }
  p.expected_delay = current;
  p.saving = bs_only_delay(inst) - current;
  return p;
}

Placement coded_placement(const FemtoInstance& inst, int iterations, double tolerance) {
  inst.validate();
  auto order = useful_helpers(inst);

  // variables: x[h][f] then s[u][f][k] = fraction user u takes of file f from
  // its k-th useful helper.  maximize sum p_f w(u,h) s subject to
  //   s <= x (coupling), sum_k s <= 1, sum_f x_hf <= M_h, x <= 1.
  int H = inst.n_helpers, F = inst.n_files, U = inst.n_users;
  auto xid = [&](int h, int f) { return h * F + f; };
  int nx = H * F;
  std::vector<int> s_base(static_cast<std::size_t>(U) * F, -1);
  int nv = nx;
  for (int u = 0; u < U; ++u) {
    for (int f = 0; f < F; ++f) {
      s_base[static_cast<std::size_t>(u) * F + f] = nv;
      nv += static_cast<int>(order[static_cast<std::size_t>(u)].size());
    }
  }

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c(static_cast<std::size_t>(nv), 0.0);
  auto add_row = [&](double rhs) -> std::vector<double>& {
    A.emplace_back(static_cast<std::size_t>(nv), 0.0);
    b.push_back(rhs);
    return A.back();
  };

  for (int u = 0; u < U; ++u) {
    const auto& ord = order[static_cast<std::size_t>(u)];
    for (int f = 0; f < F; ++f) {
      int base = s_base[static_cast<std::size_t>(u) * F + f];
      if (!ord.empty()) {
        auto& cap = add_row(1.0);  // total fetched fraction <= 1
        for (std::size_t k = 0; k < ord.size(); ++k) cap[base + static_cast<int>(k)] = 1.0;
      }
      for (std::size_t k = 0; k < ord.size(); ++k) {
        int h = ord[k];
        auto& link = add_row(0.0);  // s <= x
        link[base + static_cast<int>(k)] = 1.0;
        link[xid(h, f)] = -1.0;
        c[static_cast<std::size_t>(base) + k] =
            inst.file_pmf[f] * (1.0 / inst.bs_rate[u] - 1.0 / inst.helper_rate[h][u]);
      }
    }
  }
  for (int h = 0; h < H; ++h) {
    auto& cap = add_row(static_cast<double>(inst.capacity[static_cast<std::size_t>(h)]));
    for (int f = 0; f < F; ++f) cap[xid(h, f)] = 1.0;
    for (int f = 0; f < F; ++f) {
      auto& box = add_row(1.0);
      box[xid(h, f)] = 1.0;
    }
  }

  LpResult lp = simplex_maximize(A, b, c, iterations, tolerance);

  Placement p;
  p.x.assign(static_cast<std::size_t>(H), std::vector<double>(static_cast<std::size_t>(F), 0.0));
  for (int h = 0; h < H; ++h)
    for (int f = 0; f < F; ++f) p.x[h][f] = std::clamp(lp.x[static_cast<std::size_t>(xid(h, f))], 0.0, 1.0);
  p.converged = lp.optimal;
  p.iterations = lp.pivots;
  p.expected_delay = expected_delay(inst, p.x);
  p.saving = bs_only_delay(inst) - p.expected_delay;
  return p;
}

std::string placement_csv(const Placement& p) {
  CsvWriter w({"helper_id", "file_id", "fraction"});
  for (std::size_t h = 0; h < p.x.size(); ++h) {
    for (std::size_t f = 0; f < p.x[h].size(); ++f) {
      if (p.x[h][f] > 0.0)
        w.row({std::to_string(h), std::to_string(f), fmt_double(p.x[h][f])});
    }
  }
  return w.str();
}

}  // namespace d2dsim
