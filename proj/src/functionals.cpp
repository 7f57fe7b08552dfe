#include "parsum/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace parsum {

MatrixFunctional MatrixFunctional::from_density(Matrix rho, double psd_tol) {
  // Reuse the form validation: a density matrix is a PSD Gram matrix.
  HermitianForm checked = HermitianForm::from_gram(std::move(rho), psd_tol);
  return MatrixFunctional(checked.gram(), psd_tol);
}

Complex MatrixFunctional::apply(const AlgebraElement& a) const {
  if (a.rows() != d() || a.cols() != d())
    throw DimensionError("algebra element has wrong size");
  return (rho_ * a).trace();
}

Vector flatten_element(const AlgebraElement& a) {
  if (a.rows() != a.cols())
    throw DimensionError("algebra elements must be square");
  Eigen::Index d = a.rows();
  Vector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v[i * d + j] = a(i, j);
  return v;
}

AlgebraElement unflatten_element(const Vector& v, Eigen::Index d) {
  if (v.size() != d * d)
    throw DimensionError("coordinate vector has wrong length");
  AlgebraElement a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = v[i * d + j];
  return a;
}

HermitianForm functional_to_form(const MatrixFunctional& w) {
  Eigen::Index d = w.d();
  const Matrix& rho = w.density();
  Matrix g = Matrix::Zero(d * d, d * d);
  // t_w(E_ij, E_kl) = trace(rho E_lk E_ij) = delta_ik rho_jl conjugated per
  // the sesquilinear convention; assembled, G = I (x) rho^T.
  for (Eigen::Index i = 0; i < d; ++i)
    g.block(i * d, i * d, d, d) = rho.transpose();
  return HermitianForm::from_gram(std::move(g), w.psd_tolerance());
}

MatrixFunctional form_to_functional(const HermitianForm& t, Eigen::Index d,
                                    double check_tol, double scale_hint) {
  if (d <= 0) throw DimensionError("algebra dimension must be positive");
  if (t.dim() != d * d)
    throw DimensionError("form dimension is not the square of d");

  // rho_ji = t(E_ij, identity): summing the identity's coordinates picks out
  // the block rows (m, m).
  Matrix rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex sum = 0;
      for (Eigen::Index m = 0; m < d; ++m)
        sum += t.gram()(m * d + m, i * d + j);
      rho(j, i) = sum;
    }

  // The form must actually have the induced shape.
  Matrix expected = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    expected.block(i * d, i * d, d, d) = rho.transpose();
  double scale =
      std::max({detail::max_abs(t.gram()), scale_hint, 1e-300});
  if (detail::max_abs(t.gram() - expected) > check_tol * scale)
    throw PsdError("form is not induced by a matrix functional");

  // Clamp rounding-level negativity against the form's scale before the
  // strict density validation; a nearly-zero part of a decomposition is all
  // noise relative to its own entries but clean relative to the form.
  HermitianForm cleaned = HermitianForm::projected(
      detail::hermitian_part(rho), t.psd_tolerance(), scale);
  return MatrixFunctional::from_density(cleaned.gram(), t.psd_tolerance());
}

double hilbert_bound(const MatrixFunctional& w) {
  return w.density().trace().real();
}

MatrixFunctional functional_parallel_sum(const MatrixFunctional& w,
                                         const MatrixFunctional& v,
                                         double rank_rtol) {
  if (w.d() != v.d())
    throw DimensionError("functionals act on different algebras");
  HermitianForm tw = functional_to_form(w);
  HermitianForm tv = functional_to_form(v);
  HermitianForm p = parallel_sum(tw, tv, rank_rtol);
  // The parallel sum of two parts of the same computation can be near zero
  // (mutually singular operands); check its shape at the operands' scale.
  double hint =
      std::max(detail::max_abs(tw.gram()), detail::max_abs(tv.gram()));
  return form_to_functional(p, w.d(), 1e-8, hint);
}

std::pair<MatrixFunctional, MatrixFunctional> decompose_functional(
    const MatrixFunctional& w, const MatrixFunctional& v,
    const IterationConfig& config, IterationTrace* trace_out) {
  if (w.d() != v.d())
    throw DimensionError("functionals act on different algebras");
  HermitianForm tw = functional_to_form(w);
  DecompositionResult dec =
      iterate_decompose(tw, functional_to_form(v), config);
  if (trace_out) *trace_out = dec.trace;
  // Either part can be a near-zero leftover of the iteration; its deviation
  // from the induced shape lives at the scale of the input, not its own.
  double hint = detail::max_abs(tw.gram()) + 1.0;
  return {form_to_functional(dec.regular, w.d(), 1e-8, hint),
          form_to_functional(dec.singular, w.d(), 1e-8, hint)};
}

bool check_strong_ac(const MatrixFunctional& w, const MatrixFunctional& v,
                     double rank_rtol) {
  if (w.d() != v.d())
    throw DimensionError("functionals act on different algebras");
  return is_closable(functional_to_form(w), functional_to_form(v), rank_rtol);
}

}  // namespace parsum
