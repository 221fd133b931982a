#pragma once

#include <stdexcept>
#include <vector>

#include "bsm/mub.hpp"
#include "bsm/rng.hpp"

namespace bsm {

// Storage noise N(rho) = r*rho + (1-r)*I/d, realized per qudit as a Bernoulli
// keep/replace event. For measurements in any fixed basis this reproduces the
// channel's output statistics exactly: with probability r the state is intact,
// otherwise every subsequent measurement is uniform.
struct DepolarizingChannel {
  int d;
  double r;  // retention probability

  DepolarizingChannel(int dim, double retention) : d(dim), r(retention) {
    if (d < 2) throw std::invalid_argument("DepolarizingChannel: d must be >= 2");
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("DepolarizingChannel: r must be in [0,1]");
  }
};

struct Outcome {
  int value;       // measured dit, 0..d-1
  int basis_used;  // MUB index, 0..d
};

// Draw one Born-rule outcome.
inline Outcome sample_measurement(const StateVec& state, const Basis& basis, Rng& rng,
                                  int basis_index = 0) {
  const std::vector<double> probs = measurement_distribution(state, basis);
  const double u = rng.uniform();
  double acc = 0.0;
  for (int x = 0; x < basis.dim(); ++x) {
    acc += probs[x];
    if (u < acc) return Outcome{x, basis_index};
  }
  return Outcome{basis.dim() - 1, basis_index};  // u landed in roundoff slack
}

inline bool depolarize_survival(const DepolarizingChannel& channel, Rng& rng) {
  return rng.uniform() < channel.r;
}

// Posterior over the encoded dit after measuring a MUB-encoded qudit,
// given which basis the measurement used and which basis the encoding used.
// Matched bases identify the dit; mismatched MUBs reveal nothing.
inline std::vector<double> posterior_guess(int d, const Outcome& outcome, int true_basis) {
  if (outcome.value < 0 || outcome.value >= d || outcome.basis_used < 0 ||
      outcome.basis_used > d || true_basis < 0 || true_basis > d)
    throw std::invalid_argument("posterior_guess: index out of range");
  std::vector<double> post(d, 1.0 / d);
  if (outcome.basis_used == true_basis) {
    post.assign(d, 0.0);
    post[outcome.value] = 1.0;
  }
  return post;
}

// Success probability of the measure-in-a-random-MUB strategy per qudit:
// a 1/(d+1) chance of the matched basis plus uniform guessing otherwise.
inline double random_mub_guess_probability(int d) { return 2.0 / (d + 1.0); }

}  // namespace bsm
