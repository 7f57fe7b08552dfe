#pragma once

// Nonnegative hermitian (sesquilinear) forms on C^n represented by their
// Gram matrices, plus the parallel-sum operation and the order/domination
// predicates built on it. Convention throughout: t(x, y) is linear in x and
// conjugate-linear in y, i.e. t(x, y) = y^* G x.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace parsum {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Relative tolerance for "numerically PSD" checks and clamping.
inline constexpr double kDefaultPsdTol = 1e-10;
// Relative eigenvalue cutoff for pseudo-inverse rank truncation.
inline constexpr double kDefaultRankRtol = 1e-12;

// Dimension mismatches between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input fails hermiticity / positive semidefiniteness validation.
struct PsdError : std::domain_error {
  using std::domain_error::domain_error;
};

// An iterative procedure exhausted its budget without meeting its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// (m + m^*) / 2
Matrix hermitian_part(const Matrix& m);

double max_abs(const Matrix& m);

// Largest absolute entry difference between a and b, divided by
// max(scale, tiny). Used for "agree within tol relative to scale" checks.
double rel_deviation(const Matrix& a, const Matrix& b, double scale);

struct Eigh {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // unitary, columns are eigenvectors
};

// Eigendecomposition of the hermitian part of m.
Eigh eigh(const Matrix& m);

// Moore-Penrose inverse of a (numerically) PSD hermitian matrix. Eigenvalues
// at or below rank_rtol * lambda_max are treated as exact zeros.
Matrix pinv_psd(const Matrix& m, double rank_rtol = kDefaultRankRtol);

// Orthonormal basis of the numerical kernel of PSD m (eigenvalues at or
// below rank_rtol * lambda_max). May have zero columns.
Matrix kernel_basis(const Matrix& m, double rank_rtol = kDefaultRankRtol);

}  // namespace detail

// A positive semidefinite hermitian form, stored as its Gram matrix together
// with the tolerance that validated it. Instances are immutable.
class HermitianForm {
 public:
  HermitianForm() = default;  // empty placeholder, dim 0; not a valid form

  // Validates hermiticity (relative to the largest absolute entry) and
  // positive semidefiniteness (smallest eigenvalue of the hermitian part
  // >= -psd_tol * largest eigenvalue). Throws PsdError on failure.
  static HermitianForm from_gram(Matrix gram, double psd_tol = kDefaultPsdTol);

  // Symmetrizes and clamps slightly negative eigenvalues (those in
  // [-psd_tol * max(lambda_max, scale_hint), 0)) to zero. Bigger negative
  // eigenvalues throw PsdError: they signal a real bug, not drift. The
  // scale_hint lets callers measure drift against the operands that produced
  // the matrix, which matters when the result itself is rounding noise.
  static HermitianForm projected(const Matrix& gram,
                                 double psd_tol = kDefaultPsdTol,
                                 double scale_hint = 0.0);

  static HermitianForm zero(Eigen::Index dim, double psd_tol = kDefaultPsdTol);
  static HermitianForm identity(Eigen::Index dim,
                                double psd_tol = kDefaultPsdTol);

  Eigen::Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  double psd_tolerance() const { return psd_tol_; }

  // Real part of the trace (the trace of a hermitian matrix is real up to
  // rounding in the imaginary parts).
  double trace() const { return gram_.trace().real(); }

 private:
  HermitianForm(Matrix gram, double psd_tol)
      : gram_(std::move(gram)), psd_tol_(psd_tol) {}

  Matrix gram_;
  double psd_tol_ = kDefaultPsdTol;
};

struct DominationReport {
  bool dominated = false;
  // Smallest c >= 0 with t <= c * w, meaningful only when dominated.
  double alpha = 0.0;
};

// t[x] = Re(x^* G x). May be a tiny negative number for x near the kernel.
double quadratic_eval(const HermitianForm& t, const Vector& x);

// t(x, y) = y^* G x.
Complex sesquilinear_eval(const HermitianForm& t, const Vector& x,
                          const Vector& y);

// Pointwise order t <= w: G_w - G_t is PSD up to the forms' tolerance
// (relative to the larger of the two Gram magnitudes).
bool form_leq(const HermitianForm& t, const HermitianForm& w);

// Parallel sum t : w, the infimum over splittings
// (t : w)[x] = inf_y { w[y + x] + t[y] }, realized as
// G_t (G_t + G_w)^+ G_w followed by re-symmetrization and PSD clamping.
HermitianForm parallel_sum(const HermitianForm& t, const HermitianForm& w,
                           double rank_rtol = kDefaultRankRtol);

// Mutual singularity: the only form below both t and w is zero, detected as
// trace(t : w) <= tol * (trace t + trace w + 1).
bool is_singular_pair(const HermitianForm& t, const HermitianForm& w,
                      double rank_rtol = kDefaultRankRtol);

// Whether t <= alpha * w for some finite alpha >= 0, i.e. (in finite
// dimension) ker(G_w) is contained in ker(G_t). When dominated, alpha is the
// largest eigenvalue of W^{+1/2} G_t W^{+1/2}.
DominationReport is_dominated(const HermitianForm& t, const HermitianForm& w,
                              double rank_rtol = kDefaultRankRtol);

// w-closability of t. In finite dimension this coincides with the kernel
// inclusion ker(G_w) subset-of ker(G_t); almost-domination and closability
// collapse to the same predicate here.
bool is_closable(const HermitianForm& t, const HermitianForm& w,
                 double rank_rtol = kDefaultRankRtol);

}  // namespace parsum
