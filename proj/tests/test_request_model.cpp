#include <cmath>
#include <vector>

#include "doctest.h"

#include "d2dsim/request_model.hpp"

using namespace d2dsim;

TEST_CASE("popularity pmf normalizes and ranks correctly") {
  for (int m : {1, 2, 50, 1000, 100000}) {
    for (double g : {0.0, 0.4, 1.0, 2.0}) {
      auto pmf = zipf_pmf(m, g);
      REQUIRE(static_cast<int>(pmf.size()) == m);
      for (std::size_t f = 1; f < pmf.size(); ++f) CHECK(pmf[f] <= pmf[f - 1]);
      // compensated sum so the measurement is sharper than the tolerance
      double sum = 0.0, comp = 0.0;
      for (std::size_t f = pmf.size(); f-- > 0;) {
        double y = pmf[f] - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("pmf closed-form spot values") {
  auto two = zipf_pmf(2, 1.0);
  CHECK(two[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto uni = zipf_pmf(3, 0.0);
  for (double v : uni) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // head-to-tail ratio is rank_ratio^gamma independent of normalization
  auto big = zipf_pmf(1000, 0.4);
  CHECK(big[0] / big[999] == doctest::Approx(std::pow(1000.0, 0.4)).epsilon(1e-9));
}

TEST_CASE("pmf rejects bad parameters") {
  CHECK_THROWS_AS(zipf_pmf(0, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(zipf_pmf(5, -0.1), std::invalid_argument);
}

TEST_CASE("request sampling is deterministic and well distributed") {
  RequestModel model(10, 0.4);
  Rng a(9), b(9);
  auto r1 = sample_requests(model, 5000, a);
  auto r2 = sample_requests(model, 5000, b);
  CHECK(r1 == r2);

  std::vector<long> counts(10, 0);
  Rng c(13);
  const long n = 1000000;
  auto reqs = sample_requests(model, static_cast<int>(n), c);
  for (int f : reqs) {
    REQUIRE(f >= 0);
    REQUIRE(f < 10);
    ++counts[f];
  }
  for (int f = 0; f < 10; ++f) {
    double p = model.pmf[f];
    double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(counts[f]) / n - p) < 3.5 * se);
  }
}

TEST_CASE("degenerate pmf sends every request to the head") {
  RequestModel model(1, 0.7);
  Rng r(4);
  for (int f : sample_requests(model, 100, r)) CHECK(f == 0);
}
