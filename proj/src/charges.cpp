#include "parsum/charges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace parsum {

AtomSpace::AtomSpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty())
    throw std::invalid_argument("atom space must be nonempty");
  std::unordered_set<std::string> seen;
  for (const auto& a : atoms_)
    if (!seen.insert(a).second)
      throw std::invalid_argument("atom labels must be distinct: " + a);
}

Charge::Charge(AtomSpace space, Eigen::VectorXd weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (weights_.size() != space_.size())
    throw DimensionError("weight count does not match atom count");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]))
      throw PsdError("charge weights must be finite");
    if (weights_[i] < 0)
      throw PsdError("charge weights must be nonnegative");
  }
}

double Charge::value(const std::vector<bool>& mask) const {
  if (static_cast<Eigen::Index>(mask.size()) != weights_.size())
    throw DimensionError("subset mask does not match atom count");
  double sum = 0;
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (mask[i]) sum += weights_[i];
  return sum;
}

namespace {

void check_same_space(const Charge& mu, const Charge& nu) {
  if (!(mu.space() == nu.space()))
    throw DimensionError("charges live on different atom spaces");
}

}  // namespace

HermitianForm charge_to_form(const Charge& mu, double psd_tol) {
  Matrix g = Matrix::Zero(mu.size(), mu.size());
  g.diagonal() = mu.weights().cast<Complex>();
  return HermitianForm::from_gram(std::move(g), psd_tol);
}

Charge charge_parallel_sum(const Charge& mu, const Charge& nu) {
  check_same_space(mu, nu);
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    double a = mu.weights()[i], b = nu.weights()[i];
    out[i] = (a + b > 0) ? a * b / (a + b) : 0.0;
  }
  return Charge(mu.space(), std::move(out));
}

std::pair<Charge, Charge> decompose_charge(const Charge& mu, const Charge& nu,
                                           const IterationConfig& config,
                                           IterationTrace* trace_out) {
  check_same_space(mu, nu);
  DecompositionResult dec =
      iterate_decompose(charge_to_form(mu), charge_to_form(nu), config);
  if (trace_out) *trace_out = dec.trace;

  Eigen::VectorXd reg(mu.size()), sing(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    reg[i] = std::max(dec.regular.gram()(i, i).real(), 0.0);
    sing[i] = std::max(dec.singular.gram()(i, i).real(), 0.0);
  }

  if (dec.trace.converged) {
    double bound =
        100.0 * std::max(config.epsilon, 1e-15) * (mu.total() + 1.0);
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      double closed_reg = (nu.weights()[i] > 0) ? mu.weights()[i] : 0.0;
      if (std::abs(reg[i] - closed_reg) > bound ||
          std::abs(sing[i] - (mu.weights()[i] - closed_reg)) > bound)
        throw ConvergenceError(
            "iterative charge decomposition disagrees with the closed form "
            "on atom " +
            mu.space().atoms()[static_cast<size_t>(i)]);
    }
  }
  return {Charge(mu.space(), std::move(reg)),
          Charge(mu.space(), std::move(sing))};
}

bool check_absolute_continuity(const Charge& mu, const Charge& nu,
                               double tol) {
  check_same_space(mu, nu);
  double mu_null = tol * (mu.total() + 1.0);
  double nu_null = tol * (nu.total() + 1.0);
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (nu.weights()[i] <= nu_null && mu.weights()[i] > mu_null) return false;
  return true;
}

bool check_absolute_continuity_exhaustive(const Charge& mu, const Charge& nu,
                                          double tol) {
  check_same_space(mu, nu);
  if (mu.size() > 20)
    throw std::invalid_argument(
        "exhaustive subset enumeration supports at most 20 atoms");
  const auto n = static_cast<unsigned>(mu.size());
  double mu_null = tol * (mu.total() + 1.0);
  double nu_null = tol * (nu.total() + 1.0);

  // Smallest nu-value over subsets that are not numerically null; half of it
  // is the delta that witnesses the epsilon-delta criterion for every
  // epsilon, because any subset below that delta is nu-null.
  double min_positive = std::numeric_limits<double>::infinity();
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    double v = 0;
    for (unsigned i = 0; i < n; ++i)
      if (m & (1u << i)) v += nu.weights()[i];
    if (v > nu_null) min_positive = std::min(min_positive, v);
  }
  double delta = std::isfinite(min_positive)
                     ? 0.5 * min_positive
                     : std::numeric_limits<double>::infinity();

  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    double v_nu = 0, v_mu = 0;
    for (unsigned i = 0; i < n; ++i)
      if (m & (1u << i)) {
        v_nu += nu.weights()[i];
        v_mu += mu.weights()[i];
      }
    if (v_nu < delta && v_mu > mu_null) return false;
  }
  return true;
}

bool check_modulus_invariance(const Charge& mu, const Charge& nu,
                              const std::vector<StepFunction>& samples,
                              double tol) {
  check_same_space(mu, nu);
  HermitianForm p = parallel_sum(charge_to_form(mu), charge_to_form(nu));
  for (const StepFunction& phi : samples) {
    if (phi.values.size() != mu.size())
      throw DimensionError("step function does not match atom count");
    double q1 = quadratic_eval(p, phi.values);
    double q2 = quadratic_eval(p, phi.modulus().values);
    double inf_norm = phi.values.cwiseAbs().maxCoeff();
    double scale = 1.0 + std::abs(q1) + std::abs(q2) +
                   p.trace() * inf_norm * inf_norm;
    if (std::abs(q1 - q2) > tol * scale) return false;
  }
  return true;
}

}  // namespace parsum
