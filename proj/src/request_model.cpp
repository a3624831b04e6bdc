#include "d2dsim/request_model.hpp"

#include <cmath>
#include <stdexcept>

namespace d2dsim {

std::vector<double> zipf_pmf(int m, double gamma) {
  if (m < 1) throw std::invalid_argument("zipf_pmf: m must be >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("zipf_pmf: gamma must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int f = 1; f <= m; ++f) w[f - 1] = std::pow(static_cast<double>(f), -gamma);
  // Kahan sum, smallest terms first, keeps the normalizer stable for large m
  double sum = 0.0, comp = 0.0;
  for (int f = m; f >= 1; --f) {
    double y = w[f - 1] - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  for (double& x : w) x /= sum;
  return w;
}

RequestModel::RequestModel(int m_, double gamma_)
    : m(m_), gamma(gamma_), pmf(zipf_pmf(m_, gamma_)), sampler(pmf) {}

std::vector<int> sample_requests(const RequestModel& model, int n_users, Rng& rng) {
  if (n_users < 0) throw std::invalid_argument("sample_requests: negative n_users");
  std::vector<int> out(static_cast<std::size_t>(n_users));
  for (int i = 0; i < n_users; ++i) out[i] = static_cast<int>(model.sampler.sample(rng));
  return out;
}

}  // namespace d2dsim
