#include "parsum/decompose.hpp"

#include <algorithm>
#include <cmath>

namespace parsum {

HermitianForm mu_step(const HermitianForm& t, const HermitianForm& w,
                      double rank_rtol) {
  HermitianForm p = parallel_sum(t, w, rank_rtol);
  double scale = detail::max_abs(t.gram());
  return HermitianForm::projected(t.gram() - p.gram(),
                                  std::max(t.psd_tolerance(),
                                           w.psd_tolerance()),
                                  scale);
}

double residual(const HermitianForm& t_n, const HermitianForm& w,
                double rank_rtol) {
  return std::max(parallel_sum(t_n, w, rank_rtol).trace(), 0.0);
}

DecompositionResult iterate_decompose(const HermitianForm& t,
                                      const HermitianForm& w,
                                      const IterationConfig& config,
                                      double rank_rtol) {
  if (t.dim() != w.dim())
    throw DimensionError("forms have different dimensions");
  if (!(config.epsilon > 0))
    throw std::invalid_argument("epsilon must be positive");
  if (config.max_iter < 1)
    throw std::invalid_argument("max_iter must be at least 1");

  double tol = std::max(t.psd_tolerance(), w.psd_tolerance());
  double t_scale = detail::max_abs(t.gram());
  double threshold = config.epsilon * (t.trace() + 1.0);

  HermitianForm current = t;
  Matrix telescope = Matrix::Zero(t.dim(), t.dim());
  std::vector<double> history;
  bool converged = false;
  bool slow = false;

  for (int step = 0;; ++step) {
    HermitianForm p = parallel_sum(current, w, rank_rtol);
    double r = std::max(p.trace(), 0.0);
    history.push_back(r);
    if (history.size() > 50) {
      double earlier = history[history.size() - 51];
      if (r > 0.5 * earlier && r > threshold) slow = true;
    }
    if (r <= threshold) {
      converged = true;
      break;
    }
    if (step >= config.max_iter - 1) break;
    telescope += p.gram();
    current = HermitianForm::projected(current.gram() - p.gram(), tol,
                                       t_scale);
  }

  // t - t_n must equal the partial sums of the subtracted parallel sums.
  double mismatch =
      detail::rel_deviation(t.gram() - current.gram(), telescope,
                            std::max(t_scale, 1.0));
  if (mismatch > 1e-7)
    throw std::runtime_error(
        "telescoping cross-check failed: accumulated drift " +
        std::to_string(mismatch));

  DecompositionResult result;
  result.singular = current;
  result.regular =
      HermitianForm::projected(t.gram() - current.gram(), tol, t_scale);
  result.trace.steps_taken = static_cast<int>(history.size());
  result.trace.converged = converged;
  result.trace.slow_decay_warning = slow;
  if (config.record_trace) result.trace.residuals = std::move(history);
  return result;
}

}  // namespace parsum
