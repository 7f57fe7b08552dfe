#pragma once

// Representable positive functionals on the d x d matrix algebra, given by a
// density matrix: w(a) = trace(rho a). The induced form t_w(a, b) = w(b* a)
// on the algebra (viewed as C^{d*d}) carries the whole decomposition theory;
// this module moves between the two pictures and specializes the
// decomposition to functionals.

#include "parsum/decompose.hpp"
#include "parsum/forms.hpp"

#include <utility>

namespace parsum {

// Elements of the algebra are plain dense matrices.
using AlgebraElement = Matrix;

class MatrixFunctional {
 public:
  // Validates that rho is hermitian PSD within psd_tol.
  static MatrixFunctional from_density(Matrix rho,
                                       double psd_tol = kDefaultPsdTol);

  Eigen::Index d() const { return rho_.rows(); }
  const Matrix& density() const { return rho_; }
  double psd_tolerance() const { return psd_tol_; }

  // w(a) = trace(rho a).
  Complex apply(const AlgebraElement& a) const;

 private:
  MatrixFunctional(Matrix rho, double psd_tol)
      : rho_(std::move(rho)), psd_tol_(psd_tol) {}

  Matrix rho_;
  double psd_tol_ = kDefaultPsdTol;
};

// Coordinates on the algebra: the matrix unit E_ij (1 in row i, column j)
// maps to coordinate i*d + j. Flattening a matrix to that coordinate vector
// and back:
Vector flatten_element(const AlgebraElement& a);
AlgebraElement unflatten_element(const Vector& v, Eigen::Index d);

// The form t_w(a, b) = trace(rho b^* a) on C^{d*d}. In the matrix-unit
// coordinates its Gram matrix is the Kronecker product I_d (x) rho^T.
HermitianForm functional_to_form(const MatrixFunctional& w);

// Inverse of functional_to_form: recovers rho from the form's action on
// matrix units against the identity, then verifies the form really has the
// induced shape (Gram == I (x) rho^T within check_tol relative to its
// magnitude, or to scale_hint when the caller knows the form is a
// near-zero piece of a computation at a larger scale). A form that fails
// the shape check throws PsdError.
MatrixFunctional form_to_functional(const HermitianForm& t, Eigen::Index d,
                                    double check_tol = 1e-8,
                                    double scale_hint = 0.0);

// Smallest C with |w(a)|^2 <= C * w(a* a) for all a; equals trace(rho).
double hilbert_bound(const MatrixFunctional& w);

// Parallel sum of functionals, computed through the induced forms. The
// result of the form-level parallel sum is again induced by a functional,
// so the conversion back is exact up to rounding.
MatrixFunctional functional_parallel_sum(const MatrixFunctional& w,
                                         const MatrixFunctional& v,
                                         double rank_rtol = kDefaultRankRtol);

// Lebesgue decomposition of w with respect to v through the induced forms:
// w = regular + singular with the regular part strongly v-absolutely
// continuous and the singular part v-singular.
std::pair<MatrixFunctional, MatrixFunctional> decompose_functional(
    const MatrixFunctional& w, const MatrixFunctional& v,
    const IterationConfig& config = {}, IterationTrace* trace_out = nullptr);

// Strong absolute continuity of w with respect to v, as closability of the
// induced form t_w along t_v (kernel inclusion in finite dimension).
bool check_strong_ac(const MatrixFunctional& w, const MatrixFunctional& v,
                     double rank_rtol = kDefaultRankRtol);

}  // namespace parsum
