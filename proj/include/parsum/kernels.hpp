#pragma once

// Positive definite operator-valued kernels on a finite point set with
// fibers C^d. A kernel K assigns a d x d matrix K(s, t) to each ordered pair
// of points; positivity means the assembled block matrix is PSD. The induced
// form on fiber functions is
//   w_K(f, g) = sum_{s,t} < f(t), K(s, t) g(s) >
// (linear in f, conjugate-linear in g), which pins the Gram block at
// block-row s, block-column t to K(s, t)^*. Coordinates: point p, fiber
// component c map to index p*d + c.

#include "parsum/decompose.hpp"
#include "parsum/forms.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace parsum {

class OperatorKernel {
 public:
  // blocks maps an ordered label pair (s, t) to the matrix K(s, t); every
  // pair must be present with a d x d block, and the assembled matrix must
  // validate as hermitian PSD (PsdError otherwise: not a positive definite
  // kernel).
  static OperatorKernel from_blocks(
      std::vector<std::string> points, Eigen::Index fiber_dim,
      const std::map<std::pair<std::string, std::string>, Matrix>& blocks,
      double psd_tol = kDefaultPsdTol);

  Eigen::Index point_count() const {
    return static_cast<Eigen::Index>(points_.size());
  }
  const std::vector<std::string>& points() const { return points_; }
  Eigen::Index fiber_dim() const { return fiber_dim_; }
  double psd_tolerance() const { return psd_tol_; }

  // K(s, t) by point indices.
  Matrix block(Eigen::Index s, Eigen::Index t) const;

 private:
  friend OperatorKernel form_to_kernel(const HermitianForm&,
                                       std::vector<std::string>,
                                       Eigen::Index);

  OperatorKernel(std::vector<std::string> points, Eigen::Index fiber_dim,
                 Matrix assembled, double psd_tol)
      : points_(std::move(points)),
        fiber_dim_(fiber_dim),
        assembled_(std::move(assembled)),
        psd_tol_(psd_tol) {}

  std::vector<std::string> points_;
  Eigen::Index fiber_dim_ = 0;
  // Gram matrix of the induced form (block (s, t) holds K(s, t)^*).
  Matrix assembled_;
  double psd_tol_ = kDefaultPsdTol;
};

// A function from the point set into the fiber, one vector per point.
struct FiberFunction {
  std::vector<Vector> values;

  // Concatenation into the induced form's coordinates.
  Vector flatten() const;
};

// The induced form w_K on C^{m*d}.
HermitianForm kernel_to_form(const OperatorKernel& k);

// Reads a kernel off a form on C^{m*d}: K(s, t) is the adjoint of the Gram
// block at (s, t). Exact inverse of kernel_to_form (no arithmetic beyond
// the adjoint). The form must be PSD of the right size, which makes the
// result a positive definite kernel.
OperatorKernel form_to_kernel(const HermitianForm& t,
                              std::vector<std::string> points,
                              Eigen::Index fiber_dim);

// Kernel order K <= L as order of the induced forms.
bool kernel_order(const OperatorKernel& k, const OperatorKernel& l);

// Lebesgue decomposition of K by L through the induced forms: K = regular +
// singular blockwise, regular part L-absolutely continuous (closable along
// w_L), singular part w_L-singular.
std::pair<OperatorKernel, OperatorKernel> decompose_kernel(
    const OperatorKernel& k, const OperatorKernel& l,
    const IterationConfig& config = {}, IterationTrace* trace_out = nullptr);

}  // namespace parsum
