#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace d2dsim {

// Subpacketization for the coded delivery scheme: t = n*M/m must be a
// positive integer.  Every file is split into one subfile per t-subset of
// users (colexicographic order), and every subfile into t parts, one labeled
// by each member.  User u caches exactly the parts whose subset contains u,
// which is m*t/n = M files' worth of packets.
struct SubpacketPlan {
  int n = 0, m = 0, M = 0, t = 0;
  long long subsets = 0;           // C(n, t)
  long long packets_per_file = 0;  // t * C(n, t)
  std::vector<std::uint32_t> subset_mask;  // colex-ordered t-subsets

  long long packet_id(int file, long long subset_rank, int label_pos) const {
    return (static_cast<long long>(file) * subsets + subset_rank) * t + label_pos;
  }
  long long total_packets() const { return static_cast<long long>(m) * packets_per_file; }
  bool user_caches(int user, long long pid) const;
};

SubpacketPlan subpacketize(int n, int m, int M);

long long binom(int n, int k);

// colex rank of a subset given as a bitmask (combinatorial number system)
long long colex_rank(std::uint32_t mask);

struct Transmission {
  int sender = 0;
  std::vector<long long> packets;  // XORed together, one per other member
};

// One transmission per (sender, (t+1)-subset) pair: the sender XORs, for each
// other member v, the part of v's requested subfile indexed by the subset
// minus v and labeled by the sender.  Runs the full worst-case schedule
// regardless of repeated requests; every payload packet is cached by the
// sender and missing at its intended receiver.
std::vector<Transmission> deliver(const SubpacketPlan& plan, const std::vector<int>& requests);

// `u<sender> | f<file>:{members}:u<label> ⊕ ...`, one line per transmission
std::string session_dump(const SubpacketPlan& plan, const std::vector<Transmission>& tx);

// Gives every packet a pseudorandom 64-bit payload, then checks that each
// user can recover every packet of its requested file, by value, from its
// cache plus the XOR equations (GF(2) elimination).  Catches both missing and
// corrupted transmissions.
bool decode_check(const SubpacketPlan& plan, const std::vector<int>& requests,
                  const std::vector<Transmission>& tx);

// total delivered load in file units, exact: (#transmissions, t*C(n,t)) reduced
std::pair<long long, long long> normalized_load(const SubpacketPlan& plan,
                                                const std::vector<Transmission>& tx);

// the closed-form (m/M)(1 - M/m) = (n-t)/t as a reduced fraction
std::pair<long long, long long> expected_normalized_load(const SubpacketPlan& plan);

}  // namespace d2dsim
