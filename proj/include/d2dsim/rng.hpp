#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace d2dsim {

// Counter-based generator: output i of a stream is mix64(base + i*GAMMA),
// where base folds (seed, stream) through the same finalizer.  Stateless in
// the counter, so forked streams are pure functions of their tag path and
// results do not depend on worker scheduling order.
// Pinned as "cbrng-v1"; golden outputs depend on the mixing, bump on change.
inline constexpr std::string_view kRngVersion = "cbrng-v1";

constexpr std::uint64_t kRngGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix64(seed + kRngGamma * mix64(stream + 1))) {}

  // independent stream keyed by tag, usable from any thread in any order
  Rng fork(std::uint64_t tag) const { return Rng(base_, tag); }

  std::uint64_t next_u64() { return mix64(base_ + (ctr_++) * kRngGamma); }

  // 53-bit mantissa uniform in [0,1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // unbiased integer in [0,n), rejection sampled
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    std::uint64_t lim = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= lim);
    return v % n;
  }

 private:
  std::uint64_t base_;
  std::uint64_t ctr_ = 0;
};

// Walker alias table.  Construction walks indices in fixed order so sampling
// is reproducible for a given pmf.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& pmf);
  std::size_t size() const { return prob_.size(); }
  std::size_t sample(Rng& rng) const {
    std::size_t i = static_cast<std::size_t>(rng.next_below(prob_.size()));
    return rng.next_double() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace d2dsim
