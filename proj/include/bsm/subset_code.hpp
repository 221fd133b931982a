#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bsm/math.hpp"

namespace bsm {

// Injective encoding of t-bit strings into k-subsets of {0,...,m-1} with
// k = m/eta, via combinadic unranking in colexicographic order. t is chosen
// so that 2^t <= binomial(m,k) <= 2^(t+1), so at least half of all subsets
// are code words.
struct SubsetCode {
  int m = 0;
  int k = 0;
  int t = 0;

  uint128 subset_count() const { return binomial128(m, k); }
};

inline SubsetCode make_subset_code(int m, int eta) {
  if (eta < 1 || m < 1 || m % eta != 0)
    throw std::invalid_argument("make_subset_code: m must be a positive multiple of eta");
  SubsetCode code;
  code.m = m;
  code.k = m / eta;
  code.t = floor_log2_u128(binomial128(code.m, code.k));
  return code;
}

// Colex rank of a sorted 0-based k-subset: sum_i C(a_i, i+1).
inline uint128 subset_rank(const SubsetCode& code, const std::vector<int>& subset) {
  if (static_cast<int>(subset.size()) != code.k)
    throw std::invalid_argument("subset_rank: wrong subset size");
  uint128 rank = 0;
  for (int i = 0; i < code.k; ++i) {
    const int a = subset[i];
    if (a < 0 || a >= code.m || (i > 0 && subset[i - 1] >= a))
      throw std::invalid_argument("subset_rank: subset must be sorted within range");
    rank += binomial128(a, i + 1);
  }
  return rank;
}

inline std::vector<int> subset_unrank(const SubsetCode& code, std::uint64_t rank) {
  std::vector<int> subset(code.k);
  uint128 v = rank;
  for (int i = code.k; i >= 1; --i) {
    // largest a with C(a, i) <= v
    int a = i - 1;
    uint128 c = 0;  // C(i-1, i) = 0
    while (a + 1 < code.m) {
      // C(a+1, i) = C(a, i) * (a+1) / (a+1-i)
      const uint128 next = a >= i ? c * static_cast<uint128>(a + 1) / static_cast<uint128>(a + 1 - i)
                                  : uint128{1};
      if (next > v) break;
      c = next;
      ++a;
    }
    subset[i - 1] = a;
    v -= c;
  }
  return subset;
}

// Enc: w in {0,1}^t (as an integer below 2^t) -> sorted k-subset of {0..m-1}.
inline std::vector<int> enc(const SubsetCode& code, std::uint64_t w) {
  if (code.t < 64 && w >= (std::uint64_t{1} << code.t))
    throw std::invalid_argument("enc: value exceeds t bits");
  return subset_unrank(code, w);
}

// Dec is defined on all subsets; it inverts enc on code words.
inline uint128 dec(const SubsetCode& code, const std::vector<int>& subset) {
  return subset_rank(code, subset);
}

}  // namespace bsm
