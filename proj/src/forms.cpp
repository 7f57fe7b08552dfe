#include "parsum/forms.hpp"

#include <algorithm>
#include <cmath>

namespace parsum {
namespace detail {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double rel_deviation(const Matrix& a, const Matrix& b, double scale) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("rel_deviation: shape mismatch");
  double diff = max_abs(a - b);
  return diff / std::max(scale, 1e-300);
}

Eigh eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix pinv_psd(const Matrix& m, double rank_rtol) {
  if (m.rows() == 0) return m;
  Eigh e = eigh(m);
  double lmax = e.values.size() ? e.values.maxCoeff() : 0.0;
  double cutoff = rank_rtol * std::max(lmax, 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values[i] > cutoff) inv[i] = 1.0 / e.values[i];
  return e.vectors * inv.asDiagonal() * e.vectors.adjoint();
}

Matrix kernel_basis(const Matrix& m, double rank_rtol) {
  Eigh e = eigh(m);
  double lmax = e.values.size() ? e.values.maxCoeff() : 0.0;
  double cutoff = rank_rtol * std::max(lmax, 0.0);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values[i] <= cutoff) ++k;
  Matrix basis(m.rows(), k);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values[i] <= cutoff) basis.col(col++) = e.vectors.col(i);
  return basis;
}

}  // namespace detail

HermitianForm HermitianForm::from_gram(Matrix gram, double psd_tol) {
  if (gram.rows() != gram.cols())
    throw DimensionError("Gram matrix must be square");
  if (gram.rows() == 0) throw DimensionError("Gram matrix must be nonempty");
  if (!gram.allFinite())
    throw PsdError("Gram matrix has non-finite entries");
  if (psd_tol <= 0) throw std::invalid_argument("psd_tol must be positive");

  double scale = detail::max_abs(gram);
  if (detail::max_abs(gram - gram.adjoint()) > psd_tol * std::max(scale, 1.0))
    throw PsdError("Gram matrix is not hermitian within tolerance");

  detail::Eigh e = detail::eigh(gram);
  double lmax = e.values.maxCoeff();
  double lmin = e.values.minCoeff();
  if (lmin < -psd_tol * std::max(lmax, 0.0))
    throw PsdError("Gram matrix is not positive semidefinite within tolerance");
  return HermitianForm(std::move(gram), psd_tol);
}

HermitianForm HermitianForm::projected(const Matrix& gram, double psd_tol,
                                       double scale_hint) {
  if (gram.rows() != gram.cols())
    throw DimensionError("Gram matrix must be square");
  if (gram.rows() == 0) throw DimensionError("Gram matrix must be nonempty");
  detail::Eigh e = detail::eigh(gram);
  double lmax = e.values.maxCoeff();
  double floor = -psd_tol * std::max({lmax, scale_hint, 0.0});
  Eigen::VectorXd clipped = e.values;
  for (Eigen::Index i = 0; i < clipped.size(); ++i) {
    if (clipped[i] < floor)
      throw PsdError("matrix lost positive semidefiniteness beyond tolerance");
    if (clipped[i] < 0) clipped[i] = 0;
  }
  Matrix g = e.vectors * clipped.asDiagonal() * e.vectors.adjoint();
  return HermitianForm(detail::hermitian_part(g), psd_tol);
}

HermitianForm HermitianForm::zero(Eigen::Index dim, double psd_tol) {
  if (dim <= 0) throw DimensionError("dimension must be positive");
  return HermitianForm(Matrix::Zero(dim, dim), psd_tol);
}

HermitianForm HermitianForm::identity(Eigen::Index dim, double psd_tol) {
  if (dim <= 0) throw DimensionError("dimension must be positive");
  return HermitianForm(Matrix::Identity(dim, dim), psd_tol);
}

namespace {

void check_same_dim(const HermitianForm& t, const HermitianForm& w) {
  if (t.dim() != w.dim())
    throw DimensionError("forms have different dimensions");
}

}  // namespace

double quadratic_eval(const HermitianForm& t, const Vector& x) {
  if (x.size() != t.dim())
    throw DimensionError("vector dimension does not match form");
  return (x.adjoint() * t.gram() * x)(0).real();
}

Complex sesquilinear_eval(const HermitianForm& t, const Vector& x,
                          const Vector& y) {
  if (x.size() != t.dim() || y.size() != t.dim())
    throw DimensionError("vector dimension does not match form");
  return (y.adjoint() * t.gram() * x)(0);
}

bool form_leq(const HermitianForm& t, const HermitianForm& w) {
  check_same_dim(t, w);
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double scale =
      std::max(detail::max_abs(t.gram()), detail::max_abs(w.gram()));
  if (scale == 0.0) return true;  // both zero
  detail::Eigh e = detail::eigh(w.gram() - t.gram());
  return e.values.minCoeff() >= -tol * scale;
}

HermitianForm parallel_sum(const HermitianForm& t, const HermitianForm& w,
                           double rank_rtol) {
  check_same_dim(t, w);
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  Matrix pinv = detail::pinv_psd(t.gram() + w.gram(), rank_rtol);
  Matrix product = t.gram() * pinv * w.gram();
  double scale =
      std::max(detail::max_abs(t.gram()), detail::max_abs(w.gram()));
  return HermitianForm::projected(detail::hermitian_part(product), tol, scale);
}

bool is_singular_pair(const HermitianForm& t, const HermitianForm& w,
                      double rank_rtol) {
  check_same_dim(t, w);
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double p = parallel_sum(t, w, rank_rtol).trace();
  return p <= tol * (t.trace() + w.trace() + 1.0);
}

DominationReport is_dominated(const HermitianForm& t, const HermitianForm& w,
                              double rank_rtol) {
  check_same_dim(t, w);
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double t_scale = detail::max_abs(t.gram());
  if (t_scale == 0.0) return {true, 0.0};

  // Kernel inclusion ker(w) in ker(t), tested exactly on the span: the
  // largest eigenvalue of t compressed to ker(w) must vanish.
  Matrix basis = detail::kernel_basis(w.gram(), rank_rtol);
  if (basis.cols() > 0) {
    Matrix compressed =
        detail::hermitian_part(basis.adjoint() * t.gram() * basis);
    detail::Eigh e = detail::eigh(compressed);
    if (e.values.maxCoeff() > tol * t_scale) return {false, 0.0};
  }

  // alpha = lambda_max(W^{+1/2} T W^{+1/2}).
  detail::Eigh ew = detail::eigh(w.gram());
  double lmax_w = ew.values.maxCoeff();
  double cutoff = rank_rtol * std::max(lmax_w, 0.0);
  Eigen::VectorXd isqrt = Eigen::VectorXd::Zero(ew.values.size());
  for (Eigen::Index i = 0; i < ew.values.size(); ++i)
    if (ew.values[i] > cutoff) isqrt[i] = 1.0 / std::sqrt(ew.values[i]);
  Matrix root = ew.vectors * isqrt.asDiagonal() * ew.vectors.adjoint();
  detail::Eigh et = detail::eigh(root * t.gram() * root);
  return {true, std::max(et.values.maxCoeff(), 0.0)};
}

bool is_closable(const HermitianForm& t, const HermitianForm& w,
                 double rank_rtol) {
  check_same_dim(t, w);
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double t_scale = detail::max_abs(t.gram());
  if (t_scale == 0.0) return true;
  Matrix basis = detail::kernel_basis(w.gram(), rank_rtol);
  if (basis.cols() == 0) return true;
  Matrix compressed =
      detail::hermitian_part(basis.adjoint() * t.gram() * basis);
  detail::Eigh e = detail::eigh(compressed);
  return e.values.maxCoeff() <= tol * t_scale;
}

}  // namespace parsum
