#pragma once

// Deterministic, platform-independent random inputs for property tests and
// the verify command. std::mt19937_64 gives a portable bit stream; the
// floating-point draws below avoid std::uniform_real_distribution and
// std::normal_distribution on purpose, since those are implementation
// defined and would break byte-identical reports across standard libraries.

#include "parsum/forms.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace parsum {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  Complex normal_complex() { return {normal(), normal()}; }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Vector random_vector(Rng& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.normal_complex();
  return v;
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phase
// ambiguity fixed by making R's diagonal positive.
inline Matrix random_unitary(Rng& rng, Eigen::Index dim) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.normal_complex();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0 ? d / a : Complex(1, 0));
  }
  return q;
}

// Random PSD Gram matrix with controlled spectrum: each eigenvalue is zero
// with probability p_zero, otherwise uniform in [lo, hi]. Keeping nonzero
// eigenvalues well away from zero keeps every downstream computation
// (pseudo-inverses, the fixed-point iteration) comfortably conditioned.
inline Matrix random_psd(Rng& rng, Eigen::Index dim, double p_zero = 0.25,
                         double lo = 0.25, double hi = 2.0) {
  Matrix u = random_unitary(rng, dim);
  Eigen::VectorXd lam(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    lam[i] = (rng.uniform() < p_zero) ? 0.0 : rng.uniform(lo, hi);
  return u * lam.asDiagonal() * u.adjoint();
}

inline HermitianForm random_form(Rng& rng, Eigen::Index dim,
                                 double p_zero = 0.25,
                                 double psd_tol = kDefaultPsdTol) {
  return HermitianForm::projected(random_psd(rng, dim, p_zero), psd_tol);
}

}  // namespace parsum
