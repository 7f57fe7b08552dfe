#pragma once

// The parallel-sum fixed-point iteration t_{n+1} = t_n - (t_n : w) and the
// Lebesgue-type decomposition it produces: t = regular + singular, where the
// singular part is the iteration's limit and the regular part is w-closable.

#include "parsum/forms.hpp"

#include <vector>

namespace parsum {

struct IterationConfig {
  // Stop when trace(t_n : w) <= epsilon * (trace(t) + 1).
  double epsilon = 1e-10;
  int max_iter = 10000;
  // When false, the residual history is dropped from the returned trace
  // (steps_taken, converged and the warning flag are still filled in).
  bool record_trace = true;
};

struct IterationTrace {
  // residuals[n] = trace(mu_w^[n](t) : w), starting at n = 0.
  std::vector<double> residuals;
  // Number of residual evaluations performed (>= 1; an already-singular
  // input costs exactly one).
  int steps_taken = 0;
  bool converged = false;
  // Set when the residual decays slower than geometrically across a 50-step
  // window (residual[n] > 0.5 * residual[n-50]).
  bool slow_decay_warning = false;
};

struct DecompositionResult {
  HermitianForm regular;
  HermitianForm singular;
  IterationTrace trace;
};

// One step of the iteration: mu_w(t) = t - (t : w). Always PSD again since
// t : w <= t.
HermitianForm mu_step(const HermitianForm& t, const HermitianForm& w,
                      double rank_rtol = kDefaultRankRtol);

// trace(t_n : w), clamped to be nonnegative.
double residual(const HermitianForm& t_n, const HermitianForm& w,
                double rank_rtol = kDefaultRankRtol);

// Runs the iteration until the residual passes the stopping rule or
// config.max_iter steps are exhausted (converged=false in that case; the
// partial decomposition is still returned). The telescoping identity
// t - t_n = sum_{k<n} (t_k : w) is cross-checked each run; a relative
// mismatch above 1e-7 throws (it would mean accumulated arithmetic drift,
// not a property of the input).
DecompositionResult iterate_decompose(const HermitianForm& t,
                                      const HermitianForm& w,
                                      const IterationConfig& config = {},
                                      double rank_rtol = kDefaultRankRtol);

}  // namespace parsum
