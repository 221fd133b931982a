#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bsm/rng.hpp"

namespace bsm {

using BitVec = std::vector<std::uint8_t>;

// Seed of a 2-universal Toeplitz hash {0,1}^input_bits -> {0,1}^ell.
// diag holds the matrix diagonals: T[i][j] = diag[i - j + input_bits - 1].
struct ExtractorSeed {
  int input_bits = 0;
  int ell = 0;
  BitVec diag;  // length input_bits + ell - 1

  bool operator==(const ExtractorSeed&) const = default;
};

inline ExtractorSeed make_extractor_seed(int input_bits, int ell, BitVec diag) {
  if (input_bits < 1 || ell < 1) throw std::invalid_argument("ExtractorSeed: bad shape");
  if (ell > input_bits)
    throw std::invalid_argument("ExtractorSeed: ell exceeds the input bit length");
  if (static_cast<int>(diag.size()) != input_bits + ell - 1)
    throw std::invalid_argument("ExtractorSeed: diag must have input_bits + ell - 1 bits");
  return ExtractorSeed{input_bits, ell, std::move(diag)};
}

inline ExtractorSeed draw_extractor_seed(int input_bits, int ell, Rng& rng) {
  BitVec diag(input_bits + ell - 1);
  for (auto& bit : diag) bit = rng.bit() ? 1 : 0;
  return make_extractor_seed(input_bits, ell, std::move(diag));
}

inline int bits_per_dit(int d) {
  if (d < 2) throw std::invalid_argument("bits_per_dit: d must be >= 2");
  return std::bit_width(static_cast<unsigned>(d - 1));
}

// Fixed-radix big-endian expansion of each dit. Injective for every d,
// surjective only for powers of two.
inline BitVec dits_to_bits(const std::vector<int>& dits, int d) {
  const int width = bits_per_dit(d);
  BitVec bits;
  bits.reserve(dits.size() * width);
  for (int dit : dits) {
    if (dit < 0 || dit >= d) throw std::invalid_argument("dits_to_bits: dit out of range");
    for (int b = width - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((dit >> b) & 1));
  }
  return bits;
}

// y = T x over GF(2) with T the Toeplitz matrix described by the seed.
inline BitVec toeplitz_extract(const BitVec& input, const ExtractorSeed& seed) {
  if (static_cast<int>(input.size()) != seed.input_bits)
    throw std::invalid_argument("toeplitz_extract: input length mismatch");
  BitVec out(seed.ell, 0);
  const int offset = seed.input_bits - 1;
  for (int i = 0; i < seed.ell; ++i) {
    std::uint8_t acc = 0;
    for (int j = 0; j < seed.input_bits; ++j) acc ^= seed.diag[i - j + offset] & input[j];
    out[i] = acc;
  }
  return out;
}

inline BitVec extract_dits(const std::vector<int>& dits, int d, const ExtractorSeed& seed) {
  return toeplitz_extract(dits_to_bits(dits, d), seed);
}

}  // namespace bsm
