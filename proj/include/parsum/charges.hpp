#pragma once

// Nonnegative charges (finitely additive set functions) on a finite atom
// space, their induced diagonal forms, and the Lebesgue decomposition of one
// charge by another. The atomwise closed form (an atom is regular exactly
// when the dominating charge gives it positive weight) is used to validate
// the iterative route.

#include "parsum/decompose.hpp"
#include "parsum/forms.hpp"

#include <string>
#include <utility>
#include <vector>

namespace parsum {

class AtomSpace {
 public:
  explicit AtomSpace(std::vector<std::string> atoms);

  Eigen::Index size() const {
    return static_cast<Eigen::Index>(atoms_.size());
  }
  const std::vector<std::string>& atoms() const { return atoms_; }

  friend bool operator==(const AtomSpace& a, const AtomSpace& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  std::vector<std::string> atoms_;
};

class Charge {
 public:
  Charge(AtomSpace space, Eigen::VectorXd weights);

  const AtomSpace& space() const { return space_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }
  double total() const { return weights_.sum(); }

  // Value on the subset selected by the mask (finite additivity made
  // concrete: the sum of the selected atom weights).
  double value(const std::vector<bool>& mask) const;

 private:
  AtomSpace space_;
  Eigen::VectorXd weights_;
};

// A simple function on the atom space, one complex value per atom.
struct StepFunction {
  Vector values;

  StepFunction modulus() const {
    StepFunction out;
    out.values = values.cwiseAbs().cast<Complex>();
    return out;
  }
};

// The form t_mu[phi] = sum_a mu(a) |phi(a)|^2 (diagonal Gram matrix).
HermitianForm charge_to_form(const Charge& mu,
                             double psd_tol = kDefaultPsdTol);

// Atomwise parallel sum mu(a) nu(a) / (mu(a) + nu(a)), with 0/0 = 0. Equals
// the diagonal of the form-level parallel sum.
Charge charge_parallel_sum(const Charge& mu, const Charge& nu);

// Lebesgue decomposition of mu with respect to nu, computed by running the
// form-level fixed-point iteration on the induced diagonal forms and mapping
// the parts back to charges. When the iteration converges, the result is
// validated against the closed form (regular(a) = mu(a) iff nu(a) > 0);
// disagreement beyond 100 * max(epsilon, 1e-15) * (mu total + 1) throws
// ConvergenceError. That can genuinely happen when nu carries weights many
// orders of magnitude below mu's: the residual threshold then masks atoms
// that are still mid-decay.
std::pair<Charge, Charge> decompose_charge(const Charge& mu, const Charge& nu,
                                           const IterationConfig& config = {},
                                           IterationTrace* trace_out = nullptr);

// Atomwise null-set criterion: every atom that nu makes (numerically) null
// is mu-null too. Weights at or below tol * (total + 1) count as null.
bool check_absolute_continuity(const Charge& mu, const Charge& nu,
                               double tol = kDefaultPsdTol);

// The epsilon-delta definition checked literally by enumerating all subsets
// (supported up to 20 atoms): with delta = half the smallest nonnull
// nu-subset value, every subset below delta in nu must be mu-null, which
// settles the criterion for every epsilon at once. Agrees with
// check_absolute_continuity by construction of the finite space.
bool check_absolute_continuity_exhaustive(const Charge& mu, const Charge& nu,
                                          double tol = kDefaultPsdTol);

// The parallel sum evaluated on a step function must match its value on the
// pointwise modulus of that function (the quadratic form only sees |phi|).
bool check_modulus_invariance(const Charge& mu, const Charge& nu,
                              const std::vector<StepFunction>& samples,
                              double tol = kDefaultPsdTol);

}  // namespace parsum
