#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace bsm {

inline constexpr double kLn2 = 0.693147180559945309417232121458;

inline double log2_of(double x) { return std::log(x) / kLn2; }

// 0 * log 0 := 0
inline double xlog2x(double p) { return p <= 0.0 ? 0.0 : p * log2_of(p); }

// Shannon entropy in bits.
inline double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) h -= xlog2x(p);
  return h;
}

using uint128 = unsigned __int128;

// Exact binomial coefficient. Throws if the value would exceed 128 bits;
// everything this library needs (m <= a few hundred, k <= ~30) fits easily.
inline uint128 binomial128(int n, int k) {
  if (k < 0 || n < 0) throw std::invalid_argument("binomial128: negative argument");
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  uint128 c = 1;
  for (int i = 1; i <= k; ++i) {
    uint128 num = static_cast<uint128>(n - k + i);
    if (c > (~uint128{0}) / num) throw std::overflow_error("binomial128: overflow");
    c = c * num / static_cast<uint128>(i);
  }
  return c;
}

inline int floor_log2_u128(uint128 v) {
  if (v == 0) throw std::invalid_argument("floor_log2_u128: zero");
  int b = -1;
  while (v != 0) {
    v >>= 1;
    ++b;
  }
  return b;
}

inline double u128_to_double(uint128 v) {
  const uint128 top = v >> 64;
  return static_cast<double>(static_cast<std::uint64_t>(top)) * 0x1.0p64 +
         static_cast<double>(static_cast<std::uint64_t>(v));
}

// ---- regularized incomplete gamma, for chi-square p-values ----

namespace detail {

inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// P(a, x): probability that a Gamma(a,1) variate is <= x.
inline double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_pvalue(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
  bool pass(double significance) const { return pvalue >= significance; }
};

// Pearson chi-square of observed counts against expected counts.
inline ChiSquareResult chi_square_test(std::span<const double> observed,
                                       std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_test: nonpositive expected count");
    const double diff = observed[i] - expected[i];
    r.statistic += diff * diff / expected[i];
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.pvalue = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

// 3-sigma half-width for a Bernoulli(p) frequency estimated from n samples.
inline double three_sigma(double p, std::uint64_t n) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

inline bool is_odd_prime(int d) {
  if (d < 3 || d % 2 == 0) return false;
  for (int q = 3; q * q <= d; q += 2)
    if (d % q == 0) return false;
  return true;
}

}  // namespace bsm
