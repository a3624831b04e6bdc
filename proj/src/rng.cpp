#include "d2dsim/rng.hpp"

#include <cstddef>

namespace d2dsim {

DiscreteSampler::DiscreteSampler(const std::vector<double>& pmf) {
  std::size_t n = pmf.size();
  if (n == 0) throw std::invalid_argument("DiscreteSampler: empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw std::invalid_argument("DiscreteSampler: negative mass");
    total += p;
  }
  if (total <= 0.0) throw std::invalid_argument("DiscreteSampler: zero total mass");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = pmf[i] * static_cast<double>(n) / total;

  // Vose's method; stacks filled in index order for determinism
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    std::uint32_t l = large.back();
    small.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) prob_[i] = 1.0;
  for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
}

}  // namespace d2dsim
