#include "parsum/kernels.hpp"

#include <unordered_set>

namespace parsum {

OperatorKernel OperatorKernel::from_blocks(
    std::vector<std::string> points, Eigen::Index fiber_dim,
    const std::map<std::pair<std::string, std::string>, Matrix>& blocks,
    double psd_tol) {
  if (points.empty()) throw DimensionError("point set must be nonempty");
  if (fiber_dim <= 0) throw DimensionError("fiber dimension must be positive");
  std::unordered_set<std::string> seen;
  for (const auto& p : points)
    if (!seen.insert(p).second)
      throw std::invalid_argument("point labels must be distinct: " + p);

  auto m = static_cast<Eigen::Index>(points.size());
  Matrix assembled(m * fiber_dim, m * fiber_dim);
  for (Eigen::Index s = 0; s < m; ++s)
    for (Eigen::Index t = 0; t < m; ++t) {
      auto it = blocks.find({points[static_cast<size_t>(s)],
                             points[static_cast<size_t>(t)]});
      if (it == blocks.end())
        throw std::invalid_argument(
            "missing kernel block (" + points[static_cast<size_t>(s)] + ", " +
            points[static_cast<size_t>(t)] + ")");
      if (it->second.rows() != fiber_dim || it->second.cols() != fiber_dim)
        throw DimensionError("kernel block has wrong size");
      assembled.block(s * fiber_dim, t * fiber_dim, fiber_dim, fiber_dim) =
          it->second.adjoint();
    }

  // Hermiticity and positivity of the assembled matrix define kernel
  // positivity; a failure here means the blocks do not form a positive
  // definite kernel.
  HermitianForm checked = HermitianForm::from_gram(std::move(assembled),
                                                   psd_tol);
  return OperatorKernel(std::move(points), fiber_dim, checked.gram(), psd_tol);
}

Matrix OperatorKernel::block(Eigen::Index s, Eigen::Index t) const {
  if (s < 0 || s >= point_count() || t < 0 || t >= point_count())
    throw DimensionError("point index out of range");
  return assembled_
      .block(s * fiber_dim_, t * fiber_dim_, fiber_dim_, fiber_dim_)
      .adjoint();
}

Vector FiberFunction::flatten() const {
  if (values.empty()) throw DimensionError("fiber function has no points");
  Eigen::Index d = values.front().size();
  Vector out(static_cast<Eigen::Index>(values.size()) * d);
  Eigen::Index at = 0;
  for (const Vector& v : values) {
    if (v.size() != d)
      throw DimensionError("fiber function has ragged components");
    out.segment(at, d) = v;
    at += d;
  }
  return out;
}

HermitianForm kernel_to_form(const OperatorKernel& k) {
  Matrix assembled(k.point_count() * k.fiber_dim(),
                   k.point_count() * k.fiber_dim());
  for (Eigen::Index s = 0; s < k.point_count(); ++s)
    for (Eigen::Index t = 0; t < k.point_count(); ++t)
      assembled.block(s * k.fiber_dim(), t * k.fiber_dim(), k.fiber_dim(),
                      k.fiber_dim()) = k.block(s, t).adjoint();
  return HermitianForm::from_gram(std::move(assembled), k.psd_tolerance());
}

OperatorKernel form_to_kernel(const HermitianForm& t,
                              std::vector<std::string> points,
                              Eigen::Index fiber_dim) {
  if (points.empty()) throw DimensionError("point set must be nonempty");
  if (fiber_dim <= 0) throw DimensionError("fiber dimension must be positive");
  auto m = static_cast<Eigen::Index>(points.size());
  if (t.dim() != m * fiber_dim)
    throw DimensionError(
        "form dimension does not equal point count times fiber dimension");
  std::unordered_set<std::string> seen;
  for (const auto& p : points)
    if (!seen.insert(p).second)
      throw std::invalid_argument("point labels must be distinct: " + p);
  return OperatorKernel(std::move(points), fiber_dim, t.gram(),
                        t.psd_tolerance());
}

bool kernel_order(const OperatorKernel& k, const OperatorKernel& l) {
  if (k.point_count() != l.point_count() || k.fiber_dim() != l.fiber_dim() ||
      k.points() != l.points())
    throw DimensionError("kernels live on different point sets");
  return form_leq(kernel_to_form(k), kernel_to_form(l));
}

std::pair<OperatorKernel, OperatorKernel> decompose_kernel(
    const OperatorKernel& k, const OperatorKernel& l,
    const IterationConfig& config, IterationTrace* trace_out) {
  if (k.point_count() != l.point_count() || k.fiber_dim() != l.fiber_dim() ||
      k.points() != l.points())
    throw DimensionError("kernels live on different point sets");
  DecompositionResult dec =
      iterate_decompose(kernel_to_form(k), kernel_to_form(l), config);
  if (trace_out) *trace_out = dec.trace;
  return {form_to_kernel(dec.regular, k.points(), k.fiber_dim()),
          form_to_kernel(dec.singular, k.points(), k.fiber_dim())};
}

}  // namespace parsum
