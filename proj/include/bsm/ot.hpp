#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bsm/interactive_hashing.hpp"
#include "bsm/math.hpp"
#include "bsm/rng.hpp"
#include "bsm/secparams.hpp"
#include "bsm/subset_code.hpp"
#include "bsm/toeplitz.hpp"
#include "bsm/wse.hpp"

namespace bsm {

// Full record of one WSE-to-FROT run. The n dits are read as an m x beta
// matrix row-major (z[j][a] = x[j*beta + a], 0-based); perm maps flat cell
// positions and satisfies: pos in I_tr  <=>  row(perm[pos]) in Enc(w).
struct FrotTranscript {
  int n = 0;
  int d = 0;
  int m = 0;
  int beta = 0;
  int eta = 0;
  int t = 0;
  int ell = 0;

  std::vector<int> x;          // Alice's WSE string
  std::vector<int> index_set;  // Bob's WSE index set I
  std::vector<int> index_set_truncated;  // I_tr, size n/eta
  bool fallback = false;       // |I| < n/eta: I_tr drawn from all subsets

  std::uint64_t w = 0;         // Bob's subset descriptor
  std::vector<int> perm;       // perm[pos] = permuted flat position
  IhTranscript ih;
  ExtractorSeed r0, r1;

  BitVec s0, s1;               // Alice's outputs
  int c = 0;                   // Bob's choice index, w == (c ? w1 : w0)
  BitVec y;                    // Bob's extracted string

  std::uint64_t seed = 0;      // seed of the FROT-stage randomness

  bool operator==(const FrotTranscript&) const = default;
};

struct FrotOptions {
  int beta = 1;
  double omega = 0.0;   // only consulted by strict-mode parameter checks
  double lambda = 0.0;
  OtMode mode = OtMode::Demo;
  std::int64_t ell_override = 0;
  double wse_eps = 0.0;
};

// Random truncation of I to the target size; when I is too small the
// replacement set is drawn uniformly from all subsets of [n]. Conditioned on
// |I| >= target, the law of the result is uniform over all target-subsets.
inline std::pair<std::vector<int>, bool> truncate_index_set(const std::vector<int>& index_set,
                                                            int n, int target, Rng& rng) {
  if (target < 0 || target > n)
    throw std::invalid_argument("truncate_index_set: target out of range");
  if (static_cast<int>(index_set.size()) >= target) {
    std::vector<int> picked = rng.subset(static_cast<int>(index_set.size()), target);
    std::vector<int> out(picked.size());
    for (std::size_t i = 0; i < picked.size(); ++i) out[i] = index_set[picked[i]];
    return {std::move(out), false};
  }
  return {rng.subset(n, target), true};
}

namespace detail {

// Flat cell positions of the rows `rows`, row-major within each row.
inline std::vector<int> cells_of_rows(const std::vector<int>& rows, int beta) {
  std::vector<int> cells;
  cells.reserve(rows.size() * beta);
  for (int j : rows)
    for (int a = 0; a < beta; ++a) cells.push_back(j * beta + a);
  return cells;
}

}  // namespace detail

inline FrotTranscript run_frot(const WseTranscript& wse, const FrotOptions& opt, Rng& rng) {
  const int n = wse.n;
  const int d = wse.d;
  const OtParams params = ot_parameters(n, opt.beta, opt.omega, opt.lambda, d, opt.mode,
                                        opt.ell_override, opt.wse_eps);
  const SubsetCode code = make_subset_code(params.m, params.eta);
  const int target = n / params.eta;

  FrotTranscript tr;
  tr.n = n;
  tr.d = d;
  tr.m = params.m;
  tr.beta = params.beta;
  tr.eta = params.eta;
  tr.t = params.t;
  tr.ell = static_cast<int>(params.ell);
  tr.x = wse.x;
  tr.index_set = wse.index_set;

  auto [i_tr, fallback] = truncate_index_set(wse.index_set, n, target, rng);
  tr.index_set_truncated = std::move(i_tr);
  tr.fallback = fallback;

  // Bob's subset descriptor and the permutation embedding I_tr in its rows.
  tr.w = rng.below(std::uint64_t{1} << tr.t);
  const std::vector<int> enc_rows = enc(code, tr.w);

  std::vector<int> known_cells = detail::cells_of_rows(enc_rows, tr.beta);
  std::vector<std::uint8_t> in_tr(n, 0), in_known(n, 0);
  for (int pos : tr.index_set_truncated) in_tr[pos] = 1;
  for (int cell : known_cells) in_known[cell] = 1;
  std::vector<int> other_cells, other_positions;
  for (int p = 0; p < n; ++p) {
    if (!in_known[p]) other_cells.push_back(p);
    if (!in_tr[p]) other_positions.push_back(p);
  }
  rng.shuffle(known_cells);
  rng.shuffle(other_cells);
  tr.perm.assign(n, -1);
  for (std::size_t i = 0; i < tr.index_set_truncated.size(); ++i)
    tr.perm[tr.index_set_truncated[i]] = known_cells[i];
  for (std::size_t i = 0; i < other_positions.size(); ++i)
    tr.perm[other_positions[i]] = other_cells[i];

  tr.ih = run_interactive_hashing(tr.t, tr.w, rng);
  tr.c = tr.w == tr.ih.w0 ? 0 : 1;

  const int input_bits = target * bits_per_dit(d);
  tr.r0 = draw_extractor_seed(input_bits, tr.ell, rng);
  tr.r1 = draw_extractor_seed(input_bits, tr.ell, rng);

  // Alice's side: permute z and extract both candidate subsets.
  std::vector<int> permuted(n);
  for (int pos = 0; pos < n; ++pos) permuted[tr.perm[pos]] = tr.x[pos];
  const auto alice_dits = [&](std::uint64_t w_bits) {
    const std::vector<int> rows = enc(code, w_bits);
    const std::vector<int> cells = detail::cells_of_rows(rows, tr.beta);
    std::vector<int> dits(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) dits[i] = permuted[cells[i]];
    return dits;
  };
  tr.s0 = extract_dits(alice_dits(tr.ih.w0), d, tr.r0);
  tr.s1 = extract_dits(alice_dits(tr.ih.w1), d, tr.r1);

  // Bob's side: he knows x only on I; fallback runs fill the gaps with 0.
  std::map<int, int> known;  // position -> dit, from (I, x_I)
  for (std::size_t i = 0; i < wse.index_set.size(); ++i)
    known[wse.index_set[i]] = wse.x_I[i];
  std::vector<int> bob_cells = detail::cells_of_rows(enc_rows, tr.beta);
  std::vector<int> cell_source(n, -1);
  for (int pos = 0; pos < n; ++pos) cell_source[tr.perm[pos]] = pos;
  std::vector<int> bob_dits(bob_cells.size(), 0);
  for (std::size_t i = 0; i < bob_cells.size(); ++i) {
    const auto it = known.find(cell_source[bob_cells[i]]);
    if (it != known.end()) bob_dits[i] = it->second;
  }
  tr.y = extract_dits(bob_dits, d, tr.c == 0 ? tr.r0 : tr.r1);
  return tr;
}

inline FrotTranscript run_frot_seeded(const WseTranscript& wse, const FrotOptions& opt,
                                      std::uint64_t seed) {
  Rng rng(seed);
  FrotTranscript tr = run_frot(wse, opt, rng);
  tr.seed = seed;
  return tr;
}

inline bool frot_correct(const FrotTranscript& tr) {
  return tr.y == (tr.c == 0 ? tr.s0 : tr.s1);
}

// pos in I_tr <=> row(perm[pos]) in Enc(w), and perm is a bijection.
inline bool permutation_respects_condition(const FrotTranscript& tr) {
  const SubsetCode code = make_subset_code(tr.m, tr.eta);
  std::vector<std::uint8_t> enc_row(tr.m, 0), seen(tr.n, 0), in_tr(tr.n, 0);
  for (int j : enc(code, tr.w)) enc_row[j] = 1;
  for (int pos : tr.index_set_truncated) in_tr[pos] = 1;
  for (int pos = 0; pos < tr.n; ++pos) {
    const int cell = tr.perm[pos];
    if (cell < 0 || cell >= tr.n || seen[cell]) return false;
    seen[cell] = 1;
    const bool lands_in_enc = enc_row[cell / tr.beta] != 0;
    if (lands_in_enc != (in_tr[pos] != 0)) return false;
  }
  return true;
}

struct ReplayResult {
  bool ok = true;
  std::string detail;
};

// Recompute every derived quantity of a transcript from its recorded
// randomness and compare with the recorded values.
inline ReplayResult replay_frot(const FrotTranscript& tr) {
  const auto fail = [](std::string why) { return ReplayResult{false, std::move(why)}; };
  if (static_cast<int>(tr.index_set_truncated.size()) != tr.n / tr.eta)
    return fail("truncated index set has the wrong size");
  if (!tr.fallback) {
    std::vector<std::uint8_t> in_i(tr.n, 0);
    for (int pos : tr.index_set) in_i[pos] = 1;
    for (int pos : tr.index_set_truncated)
      if (!in_i[pos]) return fail("I_tr not contained in I on a non-fallback run");
  }
  if (!permutation_respects_condition(tr)) return fail("permutation condition violated");

  const auto [w0, w1] = ih_solutions(tr.t, tr.ih.queries, tr.ih.responses);
  if (w0 != tr.ih.w0 || w1 != tr.ih.w1) return fail("interactive hashing outputs mismatch");
  if (tr.w != (tr.c == 0 ? w0 : w1)) return fail("choice index inconsistent with w");
  for (std::size_t i = 0; i < tr.ih.queries.size(); ++i)
    if (gf2_dot(tr.ih.queries[i], tr.w) != tr.ih.responses[i])
      return fail("interactive hashing response mismatch");

  const SubsetCode code = make_subset_code(tr.m, tr.eta);
  std::vector<int> permuted(tr.n);
  for (int pos = 0; pos < tr.n; ++pos) permuted[tr.perm[pos]] = tr.x[pos];
  const auto alice_dits = [&](std::uint64_t w_bits) {
    const std::vector<int> cells = detail::cells_of_rows(enc(code, w_bits), tr.beta);
    std::vector<int> dits(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) dits[i] = permuted[cells[i]];
    return dits;
  };
  if (extract_dits(alice_dits(w0), tr.d, tr.r0) != tr.s0) return fail("s0 mismatch");
  if (extract_dits(alice_dits(w1), tr.d, tr.r1) != tr.s1) return fail("s1 mismatch");
  if (!tr.fallback && !frot_correct(tr)) return fail("y != s_c on a non-fallback run");
  return {};
}

struct CIndependenceReport {
  std::size_t trials = 0;
  double c0_frequency = 0.0;
  double c0_z = 0.0;          // overall frequency vs 1/2
  std::size_t cells = 0;      // (w0,w1) pairs with enough mass
  double max_cell_z = 0.0;    // per-pair frequency vs 1/2
  ChiSquareResult chi;        // c vs pair-cell independence
  bool pass(double significance = 0.001) const {
    return c0_z <= 3.0 && chi.pass(significance);
  }
};

// c must look like a fair coin toss no matter which (w0, w1) pair Alice saw.
inline CIndependenceReport check_c_independence(const std::vector<FrotTranscript>& transcripts,
                                                std::size_t min_cell_count = 25) {
  if (transcripts.size() < 10000)
    throw std::invalid_argument("check_c_independence: need at least 10^4 transcripts");
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<std::int64_t, std::int64_t>> cells;
  std::int64_t c0_total = 0;
  for (const FrotTranscript& tr : transcripts) {
    auto& [count, c0] = cells[{tr.ih.w0, tr.ih.w1}];
    ++count;
    if (tr.c == 0) {
      ++c0;
      ++c0_total;
    }
  }
  CIndependenceReport rep;
  rep.trials = transcripts.size();
  rep.c0_frequency = static_cast<double>(c0_total) / static_cast<double>(rep.trials);
  rep.c0_z = std::fabs(rep.c0_frequency - 0.5) / std::sqrt(0.25 / static_cast<double>(rep.trials));
  double stat = 0.0;
  for (const auto& [pair, tally] : cells) {
    const auto [count, c0] = tally;
    if (count < static_cast<std::int64_t>(min_cell_count)) continue;
    ++rep.cells;
    const double nd = static_cast<double>(count);
    const double z = std::fabs(c0 / nd - 0.5) / std::sqrt(0.25 / nd);
    rep.max_cell_z = std::max(rep.max_cell_z, z);
    const double diff = static_cast<double>(2 * c0 - count);
    stat += diff * diff / nd;  // (c0 - c1)^2 / n, chi-square with 1 dof per cell
  }
  if (rep.cells > 0) {
    rep.chi.statistic = stat;
    rep.chi.dof = static_cast<int>(rep.cells);
    rep.chi.pvalue = chi_square_pvalue(stat, rep.chi.dof);
  }
  return rep;
}

}  // namespace bsm
