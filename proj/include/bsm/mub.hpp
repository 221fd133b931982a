#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bsm/math.hpp"
#include "bsm/rng.hpp"

namespace bsm {

using Complex = std::complex<double>;
using StateVec = std::vector<Complex>;

// Dimension of the qudit system. Bases are constructed for d = 2 and odd
// prime d; prime powers would need Galois-field phases and are rejected.
struct Dimension {
  int d;

  explicit Dimension(int dim) : d(dim) {
    if (!supported(dim))
      throw std::invalid_argument("unsupported dimension: d must be 2 or an odd prime");
  }

  static bool supported(int dim) { return dim == 2 || is_odd_prime(dim); }
};

// Orthonormal basis of C^d. Row x = amplitudes of basis vector x in the
// computational basis.
struct Basis {
  std::vector<StateVec> vectors;

  int dim() const { return static_cast<int>(vectors.size()); }
  const StateVec& vec(int x) const { return vectors.at(x); }
};

struct MubFamily {
  Dimension dim;
  std::vector<Basis> bases;  // d+1 bases; index 0 is computational

  int d() const { return dim.d; }
  int count() const { return static_cast<int>(bases.size()); }
};

inline Complex inner_product(const StateVec& a, const StateVec& b) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double norm_sq(const StateVec& v) {
  double s = 0.0;
  for (const Complex& c : v) s += std::norm(c);
  return s;
}

// The d+1 mutually unbiased bases of C^d.
//
// d = 2: Pauli Z, X, Y eigenbases.
// odd prime d: computational basis plus the d bases with components
//   w^(a*j^2 + b*j) / sqrt(d),  w = exp(2*pi*i/d),
// where a labels the basis, b the vector and j the component.
inline MubFamily build_mubs(Dimension dim) {
  const int d = dim.d;
  MubFamily family{dim, {}};
  family.bases.reserve(d + 1);

  Basis computational;
  computational.vectors.assign(d, StateVec(d, Complex{0.0, 0.0}));
  for (int x = 0; x < d; ++x) computational.vectors[x][x] = Complex{1.0, 0.0};
  family.bases.push_back(std::move(computational));

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  if (d == 2) {
    Basis x_basis, y_basis;
    x_basis.vectors = {{{inv_sqrt_d, 0.0}, {inv_sqrt_d, 0.0}},
                       {{inv_sqrt_d, 0.0}, {-inv_sqrt_d, 0.0}}};
    y_basis.vectors = {{{inv_sqrt_d, 0.0}, {0.0, inv_sqrt_d}},
                       {{inv_sqrt_d, 0.0}, {0.0, -inv_sqrt_d}}};
    family.bases.push_back(std::move(x_basis));
    family.bases.push_back(std::move(y_basis));
    return family;
  }

  for (int a = 0; a < d; ++a) {
    Basis basis;
    basis.vectors.assign(d, StateVec(d));
    for (int b = 0; b < d; ++b)
      for (int j = 0; j < d; ++j) {
        const int phase = (a * j % d * j + b * j) % d;  // a*j^2 + b*j mod d
        const double angle = 2.0 * std::numbers::pi * phase / d;
        basis.vectors[b][j] = std::polar(inv_sqrt_d, angle);
      }
    family.bases.push_back(std::move(basis));
  }
  return family;
}

inline MubFamily build_mubs(int d) { return build_mubs(Dimension(d)); }

struct MubVerification {
  double max_orthonormality_dev = 0.0;  // |<x|y> - delta_xy| within each basis
  double max_unbiasedness_dev = 0.0;    // ||<x|y>|^2 - 1/d| across basis pairs
  bool pass = false;
};

inline MubVerification verify_mubs(const MubFamily& family, double tol) {
  MubVerification report;
  const int d = family.d();
  for (int i = 0; i < family.count(); ++i) {
    const Basis& bi = family.bases[i];
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double expected = x == y ? 1.0 : 0.0;
        const double dev = std::abs(inner_product(bi.vec(x), bi.vec(y)) - expected);
        report.max_orthonormality_dev = std::max(report.max_orthonormality_dev, dev);
      }
    for (int j = i + 1; j < family.count(); ++j) {
      const Basis& bj = family.bases[j];
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
          const double p = std::norm(inner_product(bi.vec(x), bj.vec(y)));
          const double dev = std::fabs(p - 1.0 / d);
          report.max_unbiasedness_dev = std::max(report.max_unbiasedness_dev, dev);
        }
    }
  }
  report.pass = report.max_orthonormality_dev <= tol && report.max_unbiasedness_dev <= tol;
  return report;
}

inline void require_unit_norm(const StateVec& state, double tol = 1e-9) {
  if (std::fabs(norm_sq(state) - 1.0) > tol)
    throw std::invalid_argument("state is not normalized");
}

// Born-rule outcome distribution for measuring `state` in `basis`.
inline std::vector<double> measurement_distribution(const StateVec& state, const Basis& basis) {
  require_unit_norm(state);
  std::vector<double> probs(basis.dim());
  for (int x = 0; x < basis.dim(); ++x) probs[x] = std::norm(inner_product(basis.vec(x), state));
  return probs;
}

// Mean over the family of the Shannon entropy of the measurement distribution,
// in bits. Lower-bounded by log2(d+1) - 1 for every state.
inline double avg_mub_entropy(const StateVec& state, const MubFamily& family) {
  double total = 0.0;
  for (const Basis& basis : family.bases) {
    const std::vector<double> probs = measurement_distribution(state, basis);
    total += shannon_entropy(probs);
  }
  return total / family.count();
}

inline double mub_entropy_bound(int d) { return log2_of(d + 1.0) - 1.0; }

// Haar-random pure state: normalized vector of complex standard normals.
inline StateVec haar_random_state(int d, Rng& rng) {
  StateVec v(d);
  double nsq = 0.0;
  for (int i = 0; i < d; ++i) {
    v[i] = Complex{rng.normal(), rng.normal()};
    nsq += std::norm(v[i]);
  }
  const double inv = 1.0 / std::sqrt(nsq);
  for (Complex& c : v) c *= inv;
  return v;
}

}  // namespace bsm
