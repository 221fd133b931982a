#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bsm/rng.hpp"

namespace bsm {

// t-bit strings are carried as integers below 2^t; the string form is the
// big-endian binary expansion, so lexicographic order on strings is numeric
// order on integers.
struct IhTranscript {
  int t = 0;
  std::vector<std::uint64_t> queries;   // t-1 linearly independent vectors
  std::vector<std::uint8_t> responses;  // query . w over GF(2)
  std::uint64_t w0 = 0;                 // the two solutions, w0 < w1
  std::uint64_t w1 = 0;

  bool operator==(const IhTranscript&) const = default;
};

inline int gf2_dot(std::uint64_t a, std::uint64_t b) { return std::popcount(a & b) & 1; }

namespace detail {

inline void check_t(int t) {
  if (t < 1 || t > 62) throw std::invalid_argument("interactive hashing: t must be in [1, 62]");
}

}  // namespace detail

// Solve the accumulated t-1 linear constraints; the solution space has
// exactly two elements. Throws if the queries are not independent.
inline std::pair<std::uint64_t, std::uint64_t> ih_solutions(
    int t, const std::vector<std::uint64_t>& queries,
    const std::vector<std::uint8_t>& responses) {
  detail::check_t(t);
  if (queries.size() != static_cast<std::size_t>(t - 1) || responses.size() != queries.size())
    throw std::invalid_argument("ih_solutions: expected t-1 rounds");

  std::vector<std::uint64_t> rows;
  std::vector<int> pivots;
  std::vector<std::uint8_t> rhs;
  rows.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    std::uint64_t row = queries[i];
    std::uint8_t b = responses[i] & 1;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if ((row >> pivots[j]) & 1) {
        row ^= rows[j];
        b ^= rhs[j];
      }
    if (row == 0) throw std::invalid_argument("ih_solutions: dependent query set");
    const int pivot = 63 - std::countl_zero(row);
    for (std::size_t j = 0; j < rows.size(); ++j)
      if ((rows[j] >> pivot) & 1) {
        rows[j] ^= row;
        rhs[j] ^= b;
      }
    rows.push_back(row);
    pivots.push_back(pivot);
    rhs.push_back(b);
  }

  std::uint64_t pivot_mask = 0;
  for (int p : pivots) pivot_mask |= std::uint64_t{1} << p;
  const std::uint64_t all = (std::uint64_t{1} << t) - 1;
  const std::uint64_t free_bit = all & ~pivot_mask;  // exactly one column left

  std::uint64_t particular = 0;
  std::uint64_t kernel = free_bit;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rhs[j]) particular |= std::uint64_t{1} << pivots[j];
    if (rows[j] & free_bit) kernel |= std::uint64_t{1} << pivots[j];
  }
  const std::uint64_t a = particular;
  const std::uint64_t b = particular ^ kernel;
  return {std::min(a, b), std::max(a, b)};
}

// NOVY-style interactive hashing: t-1 rounds of linear queries, each drawn
// uniformly among vectors independent of the earlier ones; the response is
// the GF(2) inner product with Bob's input. The output pair contains w, and
// Alice's view never reveals which element it is.
inline IhTranscript run_interactive_hashing(int t, std::uint64_t w, Rng& rng) {
  detail::check_t(t);
  if (w >> t) throw std::invalid_argument("run_interactive_hashing: w exceeds t bits");

  IhTranscript tr;
  tr.t = t;
  std::vector<std::uint64_t> basis(t, 0);  // reduced rows keyed by leading bit
  const auto reduce = [&](std::uint64_t v) {
    for (int bit = t - 1; bit >= 0; --bit)
      if (((v >> bit) & 1) && basis[bit]) v ^= basis[bit];
    return v;
  };

  const std::uint64_t space = std::uint64_t{1} << t;
  for (int round = 0; round < t - 1; ++round) {
    std::uint64_t query, residual;
    do {
      query = rng.below(space);
      residual = reduce(query);
    } while (residual == 0);
    basis[63 - std::countl_zero(residual)] = residual;
    tr.queries.push_back(query);
    tr.responses.push_back(static_cast<std::uint8_t>(gf2_dot(query, w)));
  }

  const auto [w0, w1] = ih_solutions(t, tr.queries, tr.responses);
  tr.w0 = w0;
  tr.w1 = w1;
  return tr;
}

inline bool queries_linearly_independent(int t, const std::vector<std::uint64_t>& queries) {
  detail::check_t(t);
  std::vector<std::uint64_t> basis(t, 0);
  for (std::uint64_t q : queries) {
    for (int bit = t - 1; bit >= 0; --bit)
      if (((q >> bit) & 1) && basis[bit]) q ^= basis[bit];
    if (q == 0) return false;
    basis[63 - std::countl_zero(q)] = q;
  }
  return true;
}

}  // namespace bsm
