#include "parsum/oracle.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace parsum {
namespace detail {
namespace {

struct WSplit {
  Matrix basis;          // unitary, columns ordered [range | kernel]
  Eigen::VectorXd lam_r; // eigenvalues of the range block, descendingly safe
  Eigen::Index r = 0;    // rank of w
};

WSplit split_by_range(const Matrix& w, double rank_rtol) {
  Eigh e = eigh(w);
  double cutoff = rank_rtol * std::max(e.values.maxCoeff(), 0.0);
  Eigen::Index n = w.rows();
  WSplit out;
  out.basis.resize(n, n);
  std::vector<Eigen::Index> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < n; ++i)
    (e.values[i] > cutoff ? range_idx : kernel_idx).push_back(i);
  out.r = static_cast<Eigen::Index>(range_idx.size());
  out.lam_r.resize(out.r);
  Eigen::Index col = 0;
  for (Eigen::Index i : range_idx) {
    out.basis.col(col) = e.vectors.col(i);
    out.lam_r[col] = e.values[i];
    ++col;
  }
  for (Eigen::Index i : kernel_idx) out.basis.col(col++) = e.vectors.col(i);
  return out;
}

}  // namespace

Matrix parallel_sum_scaled(const Matrix& t, double n, const Matrix& w,
                           double rank_rtol) {
  if (!(n > 0)) throw std::invalid_argument("scale factor must be positive");
  Eigen::Index dim = t.rows();
  WSplit ws = split_by_range(w, rank_rtol);
  Eigen::Index r = ws.r;
  Eigen::Index k = dim - r;

  Matrix tp = hermitian_part(ws.basis.adjoint() * t * ws.basis);

  // t : (n w) = t - t M^- t with M = t + n w; M^- is assembled blockwise
  // from A = T_rr + n diag(lam_r) (positive definite) and the Schur
  // complement S = T_kk - T_kr A^{-1} T_rk, whose pseudo-inverse handles
  // the rank deficiency. Nothing here adds n*w to t inside a single
  // eigendecomposition, so deep rungs lose no precision.
  Matrix minv(dim, dim);
  if (r == 0) {
    minv = pinv_psd(tp, rank_rtol);
  } else {
    Matrix a = tp.topLeftCorner(r, r);
    a.diagonal() += (n * ws.lam_r).cast<Complex>();
    Eigen::LLT<Matrix> llt(a);
    Matrix ainv;
    if (llt.info() == Eigen::Success)
      ainv = llt.solve(Matrix::Identity(r, r));
    else
      ainv = pinv_psd(a, rank_rtol);
    if (k == 0) {
      minv = ainv;
    } else {
      Matrix trk = tp.topRightCorner(r, k);
      Matrix ainv_trk = ainv * trk;
      Matrix s =
          hermitian_part(tp.bottomRightCorner(k, k) - trk.adjoint() * ainv_trk);
      Matrix spinv = pinv_psd(s, rank_rtol);
      minv.topLeftCorner(r, r) =
          ainv + ainv_trk * spinv * ainv_trk.adjoint();
      minv.topRightCorner(r, k) = -ainv_trk * spinv;
      minv.bottomLeftCorner(k, r) = minv.topRightCorner(r, k).adjoint();
      minv.bottomRightCorner(k, k) = spinv;
    }
  }

  Matrix res = hermitian_part(tp - tp * minv * tp);
  return ws.basis * res * ws.basis.adjoint();
}

}  // namespace detail

double variational_minimum(const HermitianForm& t, const HermitianForm& w,
                           const Vector& x, double rank_rtol) {
  if (t.dim() != w.dim())
    throw DimensionError("forms have different dimensions");
  if (x.size() != t.dim())
    throw DimensionError("vector dimension does not match forms");
  Matrix m = t.gram() + w.gram();
  Vector y = -(detail::pinv_psd(m, rank_rtol) * (w.gram() * x));
  Vector shifted = y + x;
  double wv = (shifted.adjoint() * w.gram() * shifted)(0).real();
  double tv = (y.adjoint() * t.gram() * y)(0).real();
  return wv + tv;
}

HermitianForm scale_ladder_limit(const HermitianForm& t, const HermitianForm& w,
                         const OracleConfig& config, double rank_rtol) {
  if (t.dim() != w.dim())
    throw DimensionError("forms have different dimensions");
  if (config.n_ladder.empty())
    throw std::invalid_argument("n_ladder must be nonempty");
  for (size_t i = 0; i < config.n_ladder.size(); ++i) {
    if (!(config.n_ladder[i] > 0))
      throw std::invalid_argument("n_ladder entries must be positive");
    if (i > 0 && !(config.n_ladder[i] > config.n_ladder[i - 1]))
      throw std::invalid_argument("n_ladder must be strictly increasing");
  }
  if (!(config.agreement_tol > 0))
    throw std::invalid_argument("agreement_tol must be positive");

  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double t_scale = detail::max_abs(t.gram());
  double agree_scale = std::max(t_scale, 1e-300);

  Matrix prev;
  bool have_prev = false;
  for (double n : config.n_ladder) {
    Matrix cur =
        detail::parallel_sum_scaled(t.gram(), n, w.gram(), rank_rtol);
    if (have_prev &&
        detail::max_abs(cur - prev) <= config.agreement_tol * agree_scale)
      return HermitianForm::projected(cur, tol, t_scale);
    prev = std::move(cur);
    have_prev = true;
  }
  throw ConvergenceError(
      "scale ladder exhausted without successive agreement");
}

HermitianForm shorted_operator(const HermitianForm& t, const HermitianForm& w,
                               double rank_rtol) {
  if (t.dim() != w.dim())
    throw DimensionError("forms have different dimensions");
  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double t_scale = detail::max_abs(t.gram());
  Eigen::Index dim = t.dim();

  detail::Eigh e = detail::eigh(w.gram());
  double cutoff = rank_rtol * std::max(e.values.maxCoeff(), 0.0);
  std::vector<Eigen::Index> range_idx, kernel_idx;
  for (Eigen::Index i = 0; i < dim; ++i)
    (e.values[i] > cutoff ? range_idx : kernel_idx).push_back(i);
  Eigen::Index r = static_cast<Eigen::Index>(range_idx.size());
  Eigen::Index k = dim - r;
  if (r == 0) return HermitianForm::zero(dim, tol);
  if (k == 0) return HermitianForm::projected(t.gram(), tol, t_scale);

  Matrix basis(dim, dim);
  Eigen::Index col = 0;
  for (Eigen::Index i : range_idx) basis.col(col++) = e.vectors.col(i);
  for (Eigen::Index i : kernel_idx) basis.col(col++) = e.vectors.col(i);

  Matrix tp = detail::hermitian_part(basis.adjoint() * t.gram() * basis);
  Matrix trk = tp.topRightCorner(r, k);
  Matrix tkk_pinv = detail::pinv_psd(tp.bottomRightCorner(k, k), rank_rtol);
  Matrix schur = tp.topLeftCorner(r, r) - trk * tkk_pinv * trk.adjoint();

  Matrix embedded = Matrix::Zero(dim, dim);
  embedded.topLeftCorner(r, r) = detail::hermitian_part(schur);
  Matrix g = basis * embedded * basis.adjoint();
  return HermitianForm::projected(detail::hermitian_part(g), tol, t_scale);
}

}  // namespace parsum
