#pragma once

// Independent cross-checks for the decomposition: the variational
// characterization of the parallel sum, the singular part as a limit of
// parallel sums t : (n w), and the shorted operator (generalized Schur
// complement onto the range of w). All three are computed by routes that
// share no code with the fixed-point iteration.

#include "parsum/forms.hpp"

#include <vector>

namespace parsum {

struct OracleConfig {
  // Scale ladder for the limit of t : (n w). Must be positive and strictly
  // increasing. The default reaches 1e12: the tail decays like 1/n, so
  // successive rungs only meet agreement_tol once n is large, and the rung
  // evaluation is performed in the eigenbasis of w precisely so those deep
  // rungs stay numerically exact.
  std::vector<double> n_ladder = {1e0, 1e1, 1e2, 1e3,  1e4,  1e5, 1e6,
                                  1e7, 1e8, 1e9, 1e10, 1e11, 1e12};
  // Two successive rungs agree when their entrywise gap is at most
  // agreement_tol relative to the magnitude of t (the limit is bounded by t,
  // so t sets the natural scale; rung values themselves can be pure noise
  // for mutually singular inputs).
  double agreement_tol = 1e-8;
};

namespace detail {

// t : (n w) evaluated by block elimination in the eigenbasis of w, stable
// for arbitrarily large n (no sum t + n*w is ever eigendecomposed).
Matrix parallel_sum_scaled(const Matrix& t, double n, const Matrix& w,
                           double rank_rtol = kDefaultRankRtol);

}  // namespace detail

// inf_y { w[y + x] + t[y] }, found by solving the normal equation
// (G_t + G_w) y = -G_w x in the least-squares sense. Equals (t : w)[x].
double variational_minimum(const HermitianForm& t, const HermitianForm& w,
                           const Vector& x,
                           double rank_rtol = kDefaultRankRtol);

// Limit of t : (n w) along config.n_ladder; stops at the first pair of
// successive rungs that agree and returns the later one. Throws
// ConvergenceError when the ladder is exhausted without agreement.
HermitianForm scale_ladder_limit(const HermitianForm& t, const HermitianForm& w,
                         const OracleConfig& config = {},
                         double rank_rtol = kDefaultRankRtol);

// Largest PSD form below t whose range lies in the range of w: in an
// eigenbasis of w splitting range/kernel, the generalized Schur complement
// T_rr - T_rk T_kk^+ T_kr embedded back into the full space. The regular
// part of the decomposition of t by w equals this; the singular part equals
// t minus it.
HermitianForm shorted_operator(const HermitianForm& t, const HermitianForm& w,
                               double rank_rtol = kDefaultRankRtol);

}  // namespace parsum
