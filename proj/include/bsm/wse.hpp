#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "bsm/math.hpp"
#include "bsm/mub.hpp"
#include "bsm/qsim.hpp"
#include "bsm/rng.hpp"

namespace bsm {

// Protocol parameters. The waiting phase between transmission and basis
// reveal is enforced by call order (encode -> storage decision -> reveal),
// not by wall-clock time.
struct WseParams {
  int n;
  Dimension dim;

  WseParams(int qudits, Dimension d) : n(qudits), dim(d) {
    if (n < 1) throw std::invalid_argument("WseParams: n must be >= 1");
  }

  double index_probability() const { return 1.0 / (dim.d + 1.0); }
};

// Full record of one Protocol-1 run.
struct WseTranscript {
  int n = 0;
  int d = 0;
  std::vector<int> x;            // Alice's dit string
  std::vector<int> theta;        // Alice's bases, in {0..d}
  std::vector<int> theta_tilde;  // Bob's bases
  std::vector<int> outcomes;     // Bob's measurement results (all positions)
  std::vector<int> index_set;    // I = { i : theta_i == theta_tilde_i }, sorted
  std::vector<int> x_I;          // outcomes restricted to I
  std::uint64_t seed = 0;

  bool operator==(const WseTranscript&) const = default;
};

// Honest execution with all randomness drawn from `rng` but bases supplied by
// the caller. Mismatched positions keep their outcome for diagnostics only.
inline WseTranscript run_honest_given(const WseParams& params, const MubFamily& family,
                                      std::vector<int> x, std::vector<int> theta,
                                      std::vector<int> theta_tilde, Rng& rng) {
  if (family.d() != params.dim.d)
    throw std::invalid_argument("run_honest: family dimension does not match params");
  const int n = params.n;
  if (static_cast<int>(x.size()) != n || static_cast<int>(theta.size()) != n ||
      static_cast<int>(theta_tilde.size()) != n)
    throw std::invalid_argument("run_honest: string length mismatch");

  WseTranscript t;
  t.n = n;
  t.d = params.dim.d;
  t.x = std::move(x);
  t.theta = std::move(theta);
  t.theta_tilde = std::move(theta_tilde);
  t.outcomes.resize(n);
  for (int i = 0; i < n; ++i) {
    const StateVec& state = family.bases[t.theta[i]].vec(t.x[i]);
    t.outcomes[i] = sample_measurement(state, family.bases[t.theta_tilde[i]], rng,
                                       t.theta_tilde[i]).value;
  }
  for (int i = 0; i < n; ++i)
    if (t.theta[i] == t.theta_tilde[i]) {
      t.index_set.push_back(i);
      t.x_I.push_back(t.outcomes[i]);
    }
  return t;
}

inline WseTranscript run_honest(const WseParams& params, const MubFamily& family, Rng& rng) {
  const int n = params.n;
  const int d = params.dim.d;
  std::vector<int> x(n), theta(n), theta_tilde(n);
  for (int i = 0; i < n; ++i) x[i] = rng.index(d);
  for (int i = 0; i < n; ++i) theta[i] = rng.index(d + 1);
  for (int i = 0; i < n; ++i) theta_tilde[i] = rng.index(d + 1);
  return run_honest_given(params, family, std::move(x), std::move(theta),
                          std::move(theta_tilde), rng);
}

inline WseTranscript run_honest_seeded(const WseParams& params, const MubFamily& family,
                                       std::uint64_t seed) {
  Rng rng(seed);
  WseTranscript t = run_honest(params, family, rng);
  t.seed = seed;
  return t;
}

// Dishonest-Bob strategies simulated by the harness. Both are product
// strategies, so recorded rates are strategy-specific lower bounds on the
// attained min-entropy, not proofs of the protocol bound.
struct AdversaryStrategy {
  enum class Kind { MeasureRandomMub, StoreSubset };
  enum class Selection { RandomSubset, FirstK };

  Kind kind = Kind::MeasureRandomMub;
  double nu = 0.0;        // storage rate (StoreSubset)
  double retention = 1.0; // depolarizing r of the storage channel (StoreSubset)
  Selection selection = Selection::RandomSubset;

  static AdversaryStrategy measure_random_mub() { return {}; }

  static AdversaryStrategy store_subset(double nu, double r,
                                        Selection sel = Selection::RandomSubset) {
    if (nu < 0.0 || nu > 1.0)
      throw std::invalid_argument("AdversaryStrategy: storage rate must be in [0,1]");
    if (r < 0.0 || r > 1.0)
      throw std::invalid_argument("AdversaryStrategy: retention must be in [0,1]");
    return {Kind::StoreSubset, nu, r, sel};
  }
};

// Per-position guesses from one adversarial run. `analytic_prob` holds the
// exact per-position success probability of the strategy, so min-entropy
// rates aggregate without estimating exponentially small events.
struct GuessRecord {
  int n = 0;
  int d = 0;
  std::vector<double> analytic_prob;
  std::vector<std::uint8_t> correct;
};

inline double stored_guess_probability(int d, double r) { return r + (1.0 - r) / d; }

// Exact min-entropy rate of the StoreSubset strategy, in bits per qudit.
inline double store_subset_rate(int d, double nu, double r) {
  return -nu * log2_of(stored_guess_probability(d, r)) -
         (1.0 - nu) * log2_of(random_mub_guess_probability(d));
}

inline GuessRecord run_adversarial_bob(const WseParams& params, const MubFamily& family,
                                       const AdversaryStrategy& strategy, Rng& rng) {
  if (family.d() != params.dim.d)
    throw std::invalid_argument("run_adversarial_bob: family dimension mismatch");
  const int n = params.n;
  const int d = params.dim.d;

  std::vector<std::uint8_t> stored(n, 0);
  if (strategy.kind == AdversaryStrategy::Kind::StoreSubset) {
    const int k = static_cast<int>(strategy.nu * n);
    if (strategy.selection == AdversaryStrategy::Selection::FirstK) {
      for (int i = 0; i < k; ++i) stored[i] = 1;
    } else {
      for (int i : rng.subset(n, k)) stored[i] = 1;
    }
  }

  const DepolarizingChannel channel(d, strategy.retention);
  GuessRecord rec;
  rec.n = n;
  rec.d = d;
  rec.analytic_prob.resize(n);
  rec.correct.resize(n);

  for (int i = 0; i < n; ++i) {
    const int xi = rng.index(d);
    const int theta_i = rng.index(d + 1);
    int guess;
    if (stored[i]) {
      // Qudit sits in storage through the wait; measured in the revealed
      // basis afterwards. Depolarized qudits give a uniform outcome.
      rec.analytic_prob[i] = stored_guess_probability(d, strategy.retention);
      if (depolarize_survival(channel, rng)) {
        guess = xi;
      } else {
        guess = rng.index(d);
      }
    } else {
      // Measure immediately in a uniformly random MUB; after the basis
      // reveal, guess from the posterior (uniform tie-break).
      rec.analytic_prob[i] = random_mub_guess_probability(d);
      const int basis_used = rng.index(d + 1);
      const Outcome out = sample_measurement(family.bases[theta_i].vec(xi),
                                             family.bases[basis_used], rng, basis_used);
      const std::vector<double> post = posterior_guess(d, out, theta_i);
      double best = -1.0;
      std::vector<int> argmax;
      for (int v = 0; v < d; ++v) {
        if (post[v] > best + 1e-15) {
          best = post[v];
          argmax.assign(1, v);
        } else if (post[v] > best - 1e-15) {
          argmax.push_back(v);
        }
      }
      guess = argmax[rng.index(static_cast<int>(argmax.size()))];
    }
    rec.correct[i] = guess == xi ? 1 : 0;
  }
  return rec;
}

enum class RateMode { Analytic, Sampled };

// -(1/n) * sum_i log2(p_i) with p_i the per-position guess probability:
// the recorded analytic value, or (Sampled) the empirical frequency pooled
// over positions that share an analytic class.
inline double min_entropy_rate(const GuessRecord& record, RateMode mode = RateMode::Analytic) {
  if (record.n == 0) throw std::invalid_argument("min_entropy_rate: empty record");
  std::map<double, std::pair<std::int64_t, std::int64_t>> classes;  // prob -> {count, correct}
  for (int i = 0; i < record.n; ++i) {
    auto& [count, hits] = classes[record.analytic_prob[i]];
    ++count;
    hits += record.correct[i];
  }
  double sum = 0.0;
  for (const auto& [prob, tally] : classes) {
    const auto [count, hits] = tally;
    double p = prob;
    if (mode == RateMode::Sampled) {
      p = static_cast<double>(hits) / static_cast<double>(count);
      if (p <= 0.0) p = 0.5 / static_cast<double>(count);
    }
    sum += static_cast<double>(count) * log2_of(p);
  }
  return -sum / record.n;
}

// ---- statistical validation of honest-run index sets ----

struct IndexDistributionReport {
  int n = 0;
  std::size_t trials = 0;
  double p = 0.0;
  double max_marginal_z = 0.0;   // per-index frequency vs p
  double max_pairwise_z = 0.0;   // joint pair frequency vs p^2
  bool has_exhaustive = false;   // 2^n-cell histogram test (n <= 12 only)
  ChiSquareResult exhaustive;

  bool pass(double significance = 0.001) const {
    return max_marginal_z <= 3.0 && max_pairwise_z <= 3.0 &&
           (!has_exhaustive || exhaustive.pass(significance));
  }
};

inline IndexDistributionReport check_index_distribution(
    const std::vector<WseTranscript>& transcripts) {
  if (transcripts.size() < 1000)
    throw std::invalid_argument("check_index_distribution: need at least 10^3 transcripts");
  const int n = transcripts.front().n;
  const int d = transcripts.front().d;
  if (n < 1) throw std::invalid_argument("check_index_distribution: degenerate n");
  const double p = 1.0 / (d + 1.0);
  const auto trials = transcripts.size();

  std::vector<std::int64_t> marginal(n, 0);
  std::vector<std::int64_t> joint(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::int64_t> subset_count;
  const bool exhaustive = n <= 12;
  if (exhaustive) subset_count.assign(std::size_t{1} << n, 0);

  std::vector<std::uint8_t> member(n);
  for (const WseTranscript& t : transcripts) {
    if (t.n != n || t.d != d)
      throw std::invalid_argument("check_index_distribution: mixed transcript shapes");
    member.assign(n, 0);
    for (int i : t.index_set) member[i] = 1;
    std::uint32_t mask = 0;
    for (int i = 0; i < n; ++i)
      if (member[i]) {
        ++marginal[i];
        if (exhaustive) mask |= 1u << i;
        for (int j = i + 1; j < n; ++j)
          if (member[j]) ++joint[static_cast<std::size_t>(i) * n + j];
      }
    if (exhaustive) ++subset_count[mask];
  }

  IndexDistributionReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.p = p;
  const double sigma1 = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  const double p2 = p * p;
  const double sigma2 = std::sqrt(p2 * (1.0 - p2) / static_cast<double>(trials));
  for (int i = 0; i < n; ++i) {
    const double freq = static_cast<double>(marginal[i]) / static_cast<double>(trials);
    rep.max_marginal_z = std::max(rep.max_marginal_z, std::fabs(freq - p) / sigma1);
    for (int j = i + 1; j < n; ++j) {
      const double fj = static_cast<double>(joint[static_cast<std::size_t>(i) * n + j]) /
                        static_cast<double>(trials);
      rep.max_pairwise_z = std::max(rep.max_pairwise_z, std::fabs(fj - p2) / sigma2);
    }
  }

  if (exhaustive) {
    std::vector<double> observed(subset_count.size()), expected(subset_count.size());
    for (std::size_t mask = 0; mask < subset_count.size(); ++mask) {
      observed[mask] = static_cast<double>(subset_count[mask]);
      const int sz = std::popcount(static_cast<std::uint32_t>(mask));
      expected[mask] = static_cast<double>(trials) * std::pow(p, sz) * std::pow(1.0 - p, n - sz);
    }
    rep.has_exhaustive = true;
    rep.exhaustive = chi_square_test(observed, expected);
  }
  return rep;
}

struct HoeffdingReport {
  double empirical_tail = 0.0;   // fraction of runs with |I| < n/eta
  double bound = 0.0;            // exp(-2n [1/(d+1) - 1/eta]^2)
  double three_sigma_at_bound = 0.0;
  std::size_t trials = 0;
  bool pass = false;
};

// Empirical tail of |I| against the Hoeffding bound. With eta = 2(d+1) the
// exponent is 2n/eta^2.
inline double hoeffding_bound(int n, int d, int eta) {
  const double gap = 1.0 / (d + 1.0) - 1.0 / eta;
  return std::exp(-2.0 * n * gap * gap);
}

inline HoeffdingReport check_hoeffding_tail(const WseParams& params, const MubFamily& family,
                                            int eta, std::size_t trials, Rng& rng) {
  const int d = params.dim.d;
  if (eta <= d + 1)
    throw std::invalid_argument("check_hoeffding_tail: need eta > d+1 for a nontrivial bound");
  if (params.n % eta != 0)
    throw std::invalid_argument("check_hoeffding_tail: n must be divisible by eta");
  const int threshold = params.n / eta;
  std::size_t below = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng trial_rng = rng.split();
    const WseTranscript t = run_honest(params, family, trial_rng);
    if (static_cast<int>(t.index_set.size()) < threshold) ++below;
  }
  HoeffdingReport rep;
  rep.trials = trials;
  rep.empirical_tail = static_cast<double>(below) / static_cast<double>(trials);
  rep.bound = hoeffding_bound(params.n, d, eta);
  rep.three_sigma_at_bound = three_sigma(rep.bound, trials);
  rep.pass = rep.empirical_tail <= rep.bound + rep.three_sigma_at_bound;
  return rep;
}

}  // namespace bsm
