#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsm/math.hpp"
#include "bsm/subset_code.hpp"

namespace bsm {

// Adversary storage noise per stored qudit.
struct ChannelModel {
  enum class Kind { Identity, Depolarizing };

  Kind kind = Kind::Identity;
  int d = 2;
  double r = 1.0;  // retention, Depolarizing only

  static ChannelModel identity(int d) {
    if (d < 2) throw std::invalid_argument("ChannelModel: d must be >= 2");
    return {Kind::Identity, d, 1.0};
  }

  static ChannelModel depolarizing(int d, double r) {
    if (d < 2) throw std::invalid_argument("ChannelModel: d must be >= 2");
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("ChannelModel: r must be in [0,1]");
    return {Kind::Depolarizing, d, r};
  }

  bool is_identity() const { return kind == Kind::Identity; }

  // Diagonal / off-diagonal entries of the induced symmetric transition row.
  double q_keep() const { return is_identity() ? 1.0 : r + (1.0 - r) / d; }
  double q_flip() const { return is_identity() ? 0.0 : (1.0 - r) / d; }

  std::string name() const {
    return is_identity() ? "identity(d=" + std::to_string(d) + ")"
                         : "depolarizing(d=" + std::to_string(d) + ",r=" + std::to_string(r) + ")";
  }
};

// Classical capacity in bits. Depolarizing: log2 d + q log2 q + (d-1) q' log2 q'.
inline double capacity(const ChannelModel& ch) {
  if (ch.is_identity()) return log2_of(ch.d);
  return log2_of(ch.d) + xlog2x(ch.q_keep()) + (ch.d - 1) * xlog2x(ch.q_flip());
}

// Renyi capacity of order alpha > 1:
//   identity       -> log2 d
//   depolarizing   -> log2 d - log2(q^a + (d-1) q'^a) / (1 - a)
// Evaluated in log space so large alpha stays finite.
inline double renyi_capacity(const ChannelModel& ch, double alpha) {
  if (alpha <= 1.0) throw std::invalid_argument("renyi_capacity: alpha must exceed 1");
  if (ch.is_identity()) return log2_of(ch.d);
  const double q = ch.q_keep();
  const double qp = ch.q_flip();
  if (qp <= 0.0) return log2_of(ch.d);  // r = 1
  const double tail = (ch.d - 1) * std::exp2(alpha * (log2_of(qp) - log2_of(q)));
  const double log_sum = alpha * log2_of(q) + log2_of(1.0 + tail);
  return log2_of(ch.d) - log_sum / (1.0 - alpha);
}

// alpha -> infinity limit of the Renyi capacity.
inline double renyi_capacity_inf(const ChannelModel& ch) {
  if (ch.is_identity()) return log2_of(ch.d);
  return log2_of(ch.d) + log2_of(ch.q_keep());
}

namespace detail {

// Golden-section maximum of f on [lo, hi]; assumes unimodality.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace detail

// Strong converse exponent: sup over alpha in (1, inf) of
// ((alpha-1)/alpha) * (R - C_alpha), clamped at 0. The interior is searched
// by golden section in u = 1/alpha over alpha in (1, 1e3]; the alpha -> inf
// limit R - C_inf is taken as the boundary candidate, which makes the
// identity channel exact: gamma(R) = max(0, R - log2 d).
inline double strong_converse_gamma(const ChannelModel& ch, double rate) {
  if (rate < 0.0) throw std::invalid_argument("strong_converse_gamma: rate must be >= 0");
  const double boundary = rate - renyi_capacity_inf(ch);
  const auto objective = [&](double u) {
    return (1.0 - u) * (rate - renyi_capacity(ch, 1.0 / u));
  };
  const double interior = detail::golden_section_max(objective, 1e-3, 1.0 - 1e-12, 1e-10);
  const double gamma = std::max({0.0, interior, boundary});
  if (!std::isfinite(gamma))
    throw std::runtime_error("strong_converse_gamma: maximizer failed to converge");
  return gamma;
}

struct LambdaReport {
  double lambda = 0.0;
  bool feasible = false;
  bool no_storage = false;  // nu = 0: reported value is the storage-free limit
};

inline void validate_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("delta must lie in (0, 1/2)");
}

// Min-entropy rate lambda(delta, d) = nu * gamma^N((log2(d+1) - 1 - delta)/nu),
// clamped at 0 with a feasibility flag.
inline LambdaReport wse_lambda(int d, double delta, double nu, const ChannelModel& ch) {
  validate_delta(delta);
  if (d < 2) throw std::invalid_argument("wse_lambda: d must be >= 2");
  if (ch.d != d) throw std::invalid_argument("wse_lambda: channel dimension mismatch");
  if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("wse_lambda: nu must be in [0,1]");
  const double budget = log2_of(d + 1.0) - 1.0 - delta;
  LambdaReport rep;
  if (nu == 0.0) {
    rep.no_storage = true;
    rep.lambda = std::max(0.0, budget);
  } else {
    rep.lambda = nu * strong_converse_gamma(ch, budget / nu);
  }
  rep.feasible = rep.lambda > 0.0;
  return rep;
}

// Identity-channel simplification: log2(d+1) - 1 - delta - nu log2 d, clamped.
inline double identity_lambda_closed_form(int d, double delta, double nu) {
  return std::max(0.0, log2_of(d + 1.0) - 1.0 - delta - nu * log2_of(d));
}

// Error exponent f(delta,d) = (delta/4)^2 / (32 (log2((d+1)d) + log2(4/delta))^2).
inline double f_exponent(int d, double delta) {
  validate_delta(delta);
  const double denom_log = log2_of((d + 1.0) * d) + log2_of(4.0 / delta);
  return (delta / 4.0) * (delta / 4.0) / (32.0 * denom_log * denom_log);
}

// epsilon(delta, d, n) = 2 exp(-f(delta,d) n).
inline double wse_epsilon(int d, double delta, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("wse_epsilon: n must be >= 1");
  return 2.0 * std::exp(-f_exponent(d, delta) * static_cast<double>(n));
}

struct SecurityReport {
  int d = 0;
  double delta = 0.0;
  double nu = 0.0;
  ChannelModel channel;
  double lambda = 0.0;
  double f = 0.0;
  double capacity_bits = 0.0;
  double gamma_at_rate = 0.0;
  bool feasible = false;
  bool no_storage = false;

  double epsilon(std::int64_t n) const { return 2.0 * std::exp(-f * static_cast<double>(n)); }
};

inline SecurityReport make_security_report(int d, double delta, double nu,
                                           const ChannelModel& ch) {
  SecurityReport rep;
  rep.d = d;
  rep.delta = delta;
  rep.nu = nu;
  rep.channel = ch;
  const LambdaReport lam = wse_lambda(d, delta, nu, ch);
  rep.lambda = lam.lambda;
  rep.feasible = lam.feasible;
  rep.no_storage = lam.no_storage;
  rep.f = f_exponent(d, delta);
  rep.capacity_bits = capacity(ch);
  rep.gamma_at_rate =
      nu > 0.0 ? strong_converse_gamma(ch, (log2_of(d + 1.0) - 1.0 - delta) / nu) : 0.0;
  return rep;
}

struct RegionPoint {
  double r = 0.0;
  double capacity_bits = 0.0;
  double nu_star_new = 0.0;  // from C_N nu < log2(d+1) - 1
  double nu_star_old = 0.0;  // from C_N nu < 1/2
  bool unbounded = false;    // C_N = 0: any rate is secure, reported as 1
};

// Security-region boundary curves nu*(r) for depolarizing storage noise.
inline std::vector<RegionPoint> security_region(int d, const std::vector<double>& r_grid) {
  std::vector<RegionPoint> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    if (r <= 0.0 || r > 1.0)
      throw std::invalid_argument("security_region: grid values must lie in (0,1]");
    RegionPoint pt;
    pt.r = r;
    pt.capacity_bits = capacity(ChannelModel::depolarizing(d, r));
    if (pt.capacity_bits <= 0.0) {
      pt.unbounded = true;
      pt.nu_star_new = 1.0;
      pt.nu_star_old = 1.0;
    } else {
      pt.nu_star_new = std::min(1.0, (log2_of(d + 1.0) - 1.0) / pt.capacity_bits);
      pt.nu_star_old = std::min(1.0, 0.5 / pt.capacity_bits);
    }
    out.push_back(pt);
  }
  return out;
}

enum class OtMode { Strict, Demo };

struct OtParams {
  std::int64_t n = 0;
  int beta = 0;
  double omega = 0.0;
  double lambda = 0.0;
  int d = 0;
  OtMode mode = OtMode::Strict;
  // derived
  int m = 0;
  int eta = 0;
  int t = 0;
  std::int64_t ell = 0;
  double error = 0.0;        // 43 * 2^(-lambda^2 n / (512 omega^2 beta)) + 2 eps
  bool error_binding = true; // false in demo mode
};

inline std::int64_t ot_output_length(std::int64_t n, int d, double omega, double lambda,
                                     int beta) {
  const double per_dit = (omega - 1.0) / omega * lambda / (4.0 * (d + 1.0)) -
                         lambda * lambda / (512.0 * omega * omega * beta);
  return static_cast<std::int64_t>(std::floor(per_dit * static_cast<double>(n) - 0.5));
}

inline double ot_error_bound(std::int64_t n, double omega, double lambda, int beta,
                             double wse_eps) {
  return 43.0 * std::exp2(-lambda * lambda * static_cast<double>(n) /
                          (512.0 * omega * omega * beta)) +
         2.0 * wse_eps;
}

// Protocol-2 parameter derivation. Strict mode enforces the theorem's
// constants (omega >= d+1, beta >= max{67, 256 omega^2/lambda^2}); demo mode
// only needs a well-formed block structure and ell >= 1, and marks the error
// bound non-binding. ell_override (demo only) substitutes for the theorem
// formula, which is hopelessly conservative at desk-scale n.
inline OtParams ot_parameters(std::int64_t n, int beta, double omega, double lambda, int d,
                              OtMode mode, std::int64_t ell_override = 0, double wse_eps = 0.0) {
  if (d < 2) throw std::invalid_argument("ot_parameters: d must be >= 2");
  if (beta < 1 || n < 1 || n % beta != 0)
    throw std::invalid_argument("ot_parameters: n must be a positive multiple of beta");
  OtParams p;
  p.n = n;
  p.beta = beta;
  p.omega = omega;
  p.lambda = lambda;
  p.d = d;
  p.mode = mode;
  p.eta = 2 * (d + 1);
  const std::int64_t m = n / beta;
  if (m % p.eta != 0 || m / p.eta < 1)
    throw std::invalid_argument("ot_parameters: m = n/beta must be a positive multiple of eta");
  p.m = static_cast<int>(m);
  p.t = make_subset_code(p.m, p.eta).t;

  if (mode == OtMode::Strict) {
    if (!(lambda > 0.0)) throw std::invalid_argument("ot_parameters: lambda must be positive");
    if (omega < d + 1) throw std::invalid_argument("ot_parameters: strict mode needs omega >= d+1");
    const double beta_min = std::max(67.0, 256.0 * omega * omega / (lambda * lambda));
    if (beta < beta_min)
      throw std::invalid_argument("ot_parameters: strict mode needs beta >= max{67, 256 omega^2/lambda^2}");
    p.ell = ot_output_length(n, d, omega, lambda, beta);
    p.error = ot_error_bound(n, omega, lambda, beta, wse_eps);
    p.error_binding = true;
  } else {
    p.ell = ell_override > 0 ? ell_override
                             : (lambda > 0.0 ? ot_output_length(n, d, omega, lambda, beta) : 0);
    p.error = lambda > 0.0 ? ot_error_bound(n, omega, lambda, beta, wse_eps) : 0.0;
    p.error_binding = false;
  }
  if (p.ell < 1) throw std::invalid_argument("ot_parameters: derived ell < 1");
  return p;
}

}  // namespace bsm
