#include "d2dsim/coded.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "d2dsim/rng.hpp"

namespace d2dsim {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long colex_rank(std::uint32_t mask) {
  long long rank = 0;
  int idx = 0;
  while (mask) {
    int bit = std::countr_zero(mask);
    mask &= mask - 1;
    rank += binom(bit, ++idx);
  }
  return rank;
}

namespace {

std::vector<std::uint32_t> colex_subsets(int n, int t) {
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(binom(n, t)));
  if (t == 0) {
    out.push_back(0);
    return out;
  }
  // iterate in colex order directly: start with the least subset {0..t-1},
  // advance by the standard colex successor rule
  std::vector<int> s(static_cast<std::size_t>(t));
  std::iota(s.begin(), s.end(), 0);
  for (;;) {
    std::uint32_t mask = 0;
    for (int e : s) mask |= 1u << e;
    out.push_back(mask);
    int i = 0;
    while (i + 1 < t && s[static_cast<std::size_t>(i)] + 1 == s[static_cast<std::size_t>(i) + 1]) ++i;
    if (s[static_cast<std::size_t>(i)] + 1 >= n && i + 1 == t) break;
    ++s[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) s[static_cast<std::size_t>(j)] = j;
    if (s[static_cast<std::size_t>(t - 1)] >= n) break;
  }
  return out;
}

}  // namespace

SubpacketPlan subpacketize(int n, int m, int M) {
  if (n < 1 || m < 1 || M < 1) throw std::invalid_argument("subpacketize: n, m, M must be >= 1");
  if (M > m) throw std::invalid_argument("subpacketize: M exceeds library size");
  if (n > 24) throw std::invalid_argument("subpacketize: n too large for exhaustive subpacketization");
  long long num = static_cast<long long>(n) * M;
  if (num % m != 0)
    throw std::invalid_argument("subpacketize: t = n*M/m must be an integer");
  int t = static_cast<int>(num / m);
  if (t < 1) throw std::invalid_argument("subpacketize: t = n*M/m must be >= 1");

  SubpacketPlan plan;
  plan.n = n;
  plan.m = m;
  plan.M = M;
  plan.t = t;
  plan.subsets = binom(n, t);
  plan.packets_per_file = plan.subsets * t;
  plan.subset_mask = colex_subsets(n, t);
  return plan;
}

bool SubpacketPlan::user_caches(int user, long long pid) const {
  long long per_file = packets_per_file;
  long long within = pid % per_file;
  long long rank = within / t;
  return (subset_mask[static_cast<std::size_t>(rank)] >> user) & 1u;
}

std::vector<Transmission> deliver(const SubpacketPlan& plan, const std::vector<int>& requests) {
  if (static_cast<int>(requests.size()) != plan.n)
    throw std::invalid_argument("deliver: need one request per user");
  for (int f : requests)
    if (f < 0 || f >= plan.m) throw std::invalid_argument("deliver: request out of range");

  std::vector<Transmission> out;
  if (plan.t >= plan.n) return out;  // everyone caches everything

  auto groups = colex_subsets(plan.n, plan.t + 1);
  // rank lookup for the (t)-subsets appearing as group minus one member
  for (std::uint32_t g : groups) {
    for (int w = 0; w < plan.n; ++w) {
      if (!((g >> w) & 1u)) continue;
      Transmission tx;
      tx.sender = w;
      for (int v = 0; v < plan.n; ++v) {
        if (v == w || !((g >> v) & 1u)) continue;
        std::uint32_t sub = g & ~(1u << v);  // contains w, not v
        long long rank = colex_rank(sub);
        int label_pos = std::popcount(sub & ((1u << w) - 1u));
        tx.packets.push_back(plan.packet_id(requests[static_cast<std::size_t>(v)], rank, label_pos));
      }
      out.push_back(std::move(tx));
    }
  }
  return out;
}

std::string session_dump(const SubpacketPlan& plan, const std::vector<Transmission>& tx) {
  std::string out;
  for (const auto& t : tx) {
    out += "u" + std::to_string(t.sender) + " |";
    bool first = true;
    for (long long pid : t.packets) {
      out += first ? " " : " \xE2\x8A\x95 ";  // ⊕
      first = false;
      long long file = pid / plan.packets_per_file;
      long long within = pid % plan.packets_per_file;
      long long rank = within / plan.t;
      int label_pos = static_cast<int>(within % plan.t);
      std::uint32_t mask = plan.subset_mask[static_cast<std::size_t>(rank)];
      out += "f" + std::to_string(file) + ":{";
      bool first_el = true;
      int label = -1, seen = 0;
      for (int e = 0; e < plan.n; ++e) {
        if (!((mask >> e) & 1u)) continue;
        if (!first_el) out += ",";
        first_el = false;
        out += std::to_string(e);
        if (seen++ == label_pos) label = e;
      }
      out += "}:u" + std::to_string(label);
    }
    out += "\n";
  }
  return out;
}

bool decode_check(const SubpacketPlan& plan, const std::vector<int>& requests,
                  const std::vector<Transmission>& tx) {
  if (static_cast<int>(requests.size()) != plan.n)
    throw std::invalid_argument("decode_check: need one request per user");

  // fixed pseudorandom payloads; any nonzero assignment catches corruption
  auto truth = [&](long long pid) { return mix64(0x5eedc0de ^ static_cast<std::uint64_t>(pid)); };

  for (int u = 0; u < plan.n; ++u) {
    int want = requests[static_cast<std::size_t>(u)];

    // unknown universe: packets the user does not cache, across transmissions
    // plus its own needed ones
    std::unordered_map<long long, int> col;
    std::vector<long long> needed;
    for (long long rank = 0; rank < plan.subsets; ++rank) {
      if ((plan.subset_mask[static_cast<std::size_t>(rank)] >> u) & 1u) continue;
      for (int pos = 0; pos < plan.t; ++pos) {
        long long pid = plan.packet_id(want, rank, pos);
        needed.push_back(pid);
        col.emplace(pid, static_cast<int>(col.size()));
      }
    }
    for (const auto& t : tx) {
      for (long long pid : t.packets) {
        if (!plan.user_caches(u, pid)) col.emplace(pid, static_cast<int>(col.size()));
      }
    }

    std::size_t ncols = col.size();
    std::size_t words = (ncols + 63) / 64;
    struct Row {
      std::vector<std::uint64_t> bits;
      std::uint64_t value = 0;
    };
    std::vector<Row> rows;
    rows.reserve(tx.size());
    for (const auto& t : tx) {
      Row r;
      r.bits.assign(words, 0);
      for (long long pid : t.packets) {
        r.value ^= truth(pid);  // transmitted value
        if (plan.user_caches(u, pid)) {
          r.value ^= truth(pid);  // strip known content
        } else {
          int cidx = col.at(pid);
          r.bits[static_cast<std::size_t>(cidx) >> 6] ^= 1ULL << (cidx & 63);
        }
      }
      rows.push_back(std::move(r));
    }

    // row echelon, pivot = lowest set bit
    std::vector<int> pivot_col;
    std::vector<Row> basis;
    auto reduce = [&](Row& r) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        int pc = pivot_col[k];
        if ((r.bits[static_cast<std::size_t>(pc) >> 6] >> (pc & 63)) & 1ULL) {
          for (std::size_t w = 0; w < words; ++w) r.bits[w] ^= basis[k].bits[w];
          r.value ^= basis[k].value;
        }
      }
    };
    for (auto& r : rows) {
      reduce(r);
      int pc = -1;
      for (std::size_t w = 0; w < words && pc < 0; ++w) {
        if (r.bits[w]) pc = static_cast<int>(w * 64 + std::countr_zero(r.bits[w]));
      }
      if (pc < 0) {
        if (r.value != 0) return false;  // inconsistent equation
        continue;
      }
      pivot_col.push_back(pc);
      basis.push_back(r);
    }

    for (long long pid : needed) {
      Row unit;
      unit.bits.assign(words, 0);
      int cidx = col.at(pid);
      unit.bits[static_cast<std::size_t>(cidx) >> 6] = 1ULL << (cidx & 63);
      reduce(unit);
      bool zero = true;
      for (std::uint64_t w : unit.bits) zero = zero && w == 0;
      if (!zero) return false;            // not determined by the system
      if (unit.value != truth(pid)) return false;  // determined but wrong
    }
  }
  return true;
}

std::pair<long long, long long> normalized_load(const SubpacketPlan& plan,
                                                const std::vector<Transmission>& tx) {
  long long num = static_cast<long long>(tx.size());
  long long den = plan.packets_per_file;
  long long g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

std::pair<long long, long long> expected_normalized_load(const SubpacketPlan& plan) {
  long long num = plan.m - plan.M;  // (m/M)(1 - M/m) = (m - M)/M
  long long den = plan.M;
  long long g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

}  // namespace d2dsim
