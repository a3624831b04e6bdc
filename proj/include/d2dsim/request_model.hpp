#pragma once

#include <vector>

#include "d2dsim/rng.hpp"

namespace d2dsim {

// Popularity-ranked request distribution over m files:
//   pmf[f-1] = f^(-gamma) / sum_{j=1..m} j^(-gamma)
// Rank 1 is the most popular file; gamma = 0 degenerates to uniform.
std::vector<double> zipf_pmf(int m, double gamma);

struct RequestModel {
  int m = 0;
  double gamma = 0.0;
  std::vector<double> pmf;      // indexed by rank-1
  DiscreteSampler sampler;

  RequestModel(int m_, double gamma_);
};

// i.i.d. requests for n users; file ids are 0-based ranks
std::vector<int> sample_requests(const RequestModel& model, int n_users, Rng& rng);

}  // namespace d2dsim
