#include "parsum/verify.hpp"

#include "parsum/decompose.hpp"
#include "parsum/oracle.hpp"
#include "parsum/random.hpp"

#include <algorithm>
#include <cmath>

namespace parsum {

namespace {

void check_options(const VerifyOptions& opt) {
  if (opt.dim < 1) throw std::invalid_argument("dim must be at least 1");
  if (opt.trials < 1) throw std::invalid_argument("trials must be at least 1");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9e3779b97f4a7c15ull * (salt + 1));
}

// Most negative eigenvalue of the hermitian part, as a positive number
// (0 when PSD).
double psd_violation(const Matrix& g) {
  detail::Eigh e = detail::eigh(g);
  return std::max(-e.values.minCoeff(), 0.0);
}

double pair_scale(const HermitianForm& t, const HermitianForm& w) {
  return std::max(
      {detail::max_abs(t.gram()), detail::max_abs(w.gram()), 1e-300});
}

struct Worst {
  double value = 0.0;
  void feed(double v) { value = std::max(value, v); }
};

PropertyResult make_result(const std::string& name, const Worst& worst,
                           double threshold) {
  return {name, worst.value <= threshold, worst.value, threshold};
}

}  // namespace

std::vector<PropertyResult> run_parallel_sum_laws(const VerifyOptions& opt) {
  check_options(opt);
  std::vector<PropertyResult> out;

  {  // commutativity and t:w <= t, t:w <= w
    Rng rng(mix_seed(opt.seed, 1));
    Worst comm, bound;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      HermitianForm p = parallel_sum(t, w);
      HermitianForm q = parallel_sum(w, t);
      double scale = pair_scale(t, w);
      comm.feed(detail::rel_deviation(p.gram(), q.gram(), scale));
      bound.feed(psd_violation(t.gram() - p.gram()) / scale);
      bound.feed(psd_violation(w.gram() - p.gram()) / scale);
    }
    out.push_back(make_result("parallel_sum_commutative", comm, 1e-10));
    out.push_back(make_result("parallel_sum_below_operands", bound, 1e-9));
  }

  {  // associativity
    Rng rng(mix_seed(opt.seed, 2));
    Worst dev;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      HermitianForm u = random_form(rng, opt.dim);
      HermitianForm left = parallel_sum(parallel_sum(t, w), u);
      HermitianForm right = parallel_sum(t, parallel_sum(w, u));
      double scale = std::max(pair_scale(t, w), detail::max_abs(u.gram()));
      dev.feed(detail::rel_deviation(left.gram(), right.gram(), scale));
    }
    out.push_back(make_result("parallel_sum_associative", dev, 1e-8));
  }

  {  // monotonicity: t <= t', w <= w' implies t:w <= t':w'
    Rng rng(mix_seed(opt.seed, 3));
    Worst slack;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      HermitianForm t2 = HermitianForm::projected(
          t.gram() + 0.5 * random_psd(rng, opt.dim));
      HermitianForm w2 = HermitianForm::projected(
          w.gram() + 0.5 * random_psd(rng, opt.dim));
      HermitianForm p = parallel_sum(t, w);
      HermitianForm p2 = parallel_sum(t2, w2);
      slack.feed(psd_violation(p2.gram() - p.gram()) / pair_scale(t2, w2));
    }
    out.push_back(make_result("parallel_sum_monotone", slack, 1e-9));
  }

  {  // positive homogeneity: (c t):(c w) = c (t:w)
    Rng rng(mix_seed(opt.seed, 4));
    Worst dev;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      double c = rng.uniform(0.1, 10.0);
      HermitianForm scaled = parallel_sum(
          HermitianForm::projected(c * t.gram()),
          HermitianForm::projected(c * w.gram()));
      Matrix expected = c * parallel_sum(t, w).gram();
      dev.feed(detail::rel_deviation(scaled.gram(), expected,
                                     c * pair_scale(t, w)));
    }
    out.push_back(make_result("parallel_sum_homogeneous", dev, 1e-10));
  }

  {  // concavity: (t1:w1) + (t2:w2) <= (t1+t2):(w1+w2)
    Rng rng(mix_seed(opt.seed, 5));
    Worst slack;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t1 = random_form(rng, opt.dim);
      HermitianForm w1 = random_form(rng, opt.dim);
      HermitianForm t2 = random_form(rng, opt.dim);
      HermitianForm w2 = random_form(rng, opt.dim);
      Matrix lhs = parallel_sum(t1, w1).gram() + parallel_sum(t2, w2).gram();
      Matrix rhs = parallel_sum(HermitianForm::projected(t1.gram() + t2.gram()),
                                HermitianForm::projected(w1.gram() + w2.gram()))
                       .gram();
      double scale = std::max(pair_scale(t1, w1), pair_scale(t2, w2));
      slack.feed(psd_violation(rhs - lhs) / scale);
    }
    out.push_back(make_result("parallel_sum_superadditive", slack, 1e-9));
  }

  {  // downward continuity along t + eps I, w + eps I as eps -> 0
    Rng rng(mix_seed(opt.seed, 6));
    Worst slack, tail;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      Matrix base = parallel_sum(t, w).gram();
      double scale = std::max(pair_scale(t, w), 1.0);
      Matrix eye = Matrix::Identity(opt.dim, opt.dim);
      Matrix prev_gap;
      double first_gap = 0;
      for (int k = 1; k <= 6; ++k) {
        double eps = std::pow(10.0, -k);
        Matrix gap = parallel_sum(HermitianForm::projected(t.gram() + eps * eye),
                                  HermitianForm::projected(w.gram() + eps * eye))
                         .gram() -
                     base;
        slack.feed(psd_violation(gap) / scale);  // approach from above
        if (k == 1) first_gap = detail::max_abs(gap);
        if (k > 1) slack.feed(psd_violation(prev_gap - gap) / scale);
        // The decay rate depends on the conditioning of t + w, so the limit
        // check is relative to the first rung: superadditivity puts that one
        // at eps/2 = 0.05 or larger, and monotone decrease caps the ratio at 1.
        if (k == 6)
          tail.feed(detail::max_abs(gap) / std::max(first_gap, 1e-300));
        prev_gap = std::move(gap);
      }
    }
    out.push_back(
        make_result("parallel_sum_downward_continuous_monotone", slack, 1e-9));
    out.push_back(
        make_result("parallel_sum_downward_continuous_limit", tail, 0.2));
  }

  {  // polarization identity recovers the sesquilinear values
    Rng rng(mix_seed(opt.seed, 7));
    Worst dev;
    const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      Vector x = random_vector(rng, opt.dim);
      Vector y = random_vector(rng, opt.dim);
      Complex sum = 0;
      for (int k = 0; k < 4; ++k)
        sum += powers[k] * quadratic_eval(t, x + powers[k] * y);
      Complex direct = sesquilinear_eval(t, x, y);
      double scale =
          1.0 + detail::max_abs(t.gram()) * (x.squaredNorm() + y.squaredNorm());
      dev.feed(std::abs(0.25 * sum - direct) / scale);
    }
    out.push_back(make_result("polarization_identity", dev, 1e-10));
  }

  return out;
}

std::vector<PropertyResult> run_decomposition_laws(const VerifyOptions& opt) {
  check_options(opt);
  std::vector<PropertyResult> out;

  {  // iterate chain: monotone decrease and t - t_n <= n w
    Rng rng(mix_seed(opt.seed, 11));
    Worst mono, telescope;
    int chain_trials = std::max(opt.trials / 4, 1);
    for (int i = 0; i < chain_trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      double scale = pair_scale(t, w);
      HermitianForm cur = t;
      for (int n = 1; n <= 20; ++n) {
        HermitianForm next = mu_step(cur, w);
        mono.feed(psd_violation(cur.gram() - next.gram()) / scale);
        telescope.feed(
            psd_violation(n * w.gram() - (t.gram() - next.gram())) /
            (scale * n));
        cur = next;
      }
    }
    out.push_back(make_result("iterates_monotone_decreasing", mono, 1e-9));
    out.push_back(make_result("iterates_telescoping_bound", telescope, 1e-9));
  }

  {  // decomposition output contract
    Rng rng(mix_seed(opt.seed, 12));
    Worst sum_dev, sing_resid, not_closable;
    for (int i = 0; i < opt.trials; ++i) {
      HermitianForm t = random_form(rng, opt.dim);
      HermitianForm w = random_form(rng, opt.dim);
      DecompositionResult dec = iterate_decompose(t, w);
      double scale = std::max(detail::max_abs(t.gram()), 1e-300);
      sum_dev.feed(detail::rel_deviation(
          dec.regular.gram() + dec.singular.gram(), t.gram(), scale));
      sing_resid.feed(residual(dec.singular, w) / (t.trace() + 1.0));
      not_closable.feed(is_closable(dec.regular, w) ? 0.0 : 1.0);
    }
    out.push_back(make_result("decomposition_parts_sum", sum_dev, 1e-8));
    out.push_back(
        make_result("decomposition_singular_part_singular", sing_resid, 1e-8));
    out.push_back(
        make_result("decomposition_regular_part_closable", not_closable, 0.0));
  }

  {  // fixed points of the step are exactly the mutually singular pairs
    Rng rng(mix_seed(opt.seed, 13));
    Worst fixed_dev, detect;
    for (int i = 0; i < opt.trials; ++i) {
      // Mutually singular pair: compress two PSD draws onto complementary
      // ranges of a random unitary.
      Matrix u = random_unitary(rng, opt.dim);
      Eigen::Index r = opt.dim / 2;
      Matrix p1 = u.leftCols(r) * u.leftCols(r).adjoint();
      Matrix p2 = u.rightCols(opt.dim - r) * u.rightCols(opt.dim - r).adjoint();
      HermitianForm t = HermitianForm::projected(
          p1 * random_psd(rng, opt.dim, 0.0) * p1);
      HermitianForm w = HermitianForm::projected(
          p2 * random_psd(rng, opt.dim, 0.0) * p2);
      double scale = pair_scale(t, w);
      fixed_dev.feed(
          detail::rel_deviation(mu_step(t, w).gram(), t.gram(), scale));
      detect.feed(is_singular_pair(t, w) ? 0.0 : 1.0);

      // And a definite pair is never a fixed point.
      HermitianForm t2 = random_form(rng, opt.dim, 0.0);
      HermitianForm w2 = random_form(rng, opt.dim, 0.0);
      double moved = t2.trace() - mu_step(t2, w2).trace();
      detect.feed(moved > 1e-6 * (t2.trace() + 1.0) ? 0.0 : 1.0);
      detect.feed(is_singular_pair(t2, w2) ? 1.0 : 0.0);
    }
    out.push_back(make_result("singular_pairs_are_fixed_points", fixed_dev, 1e-12));
    out.push_back(make_result("singularity_detection", detect, 0.0));
  }

  return out;
}

PropertyResult run_oracle_agreement(const VerifyOptions& opt) {
  check_options(opt);
  Rng rng(mix_seed(opt.seed, 21));
  Worst dev;
  for (int i = 0; i < opt.trials; ++i) {
    HermitianForm t = random_form(rng, opt.dim);
    HermitianForm w = random_form(rng, opt.dim);
    double scale = std::max(detail::max_abs(t.gram()), 1e-300);

    Matrix reg_iter = iterate_decompose(t, w).regular.gram();
    Matrix reg_short = shorted_operator(t, w).gram();
    Matrix reg_ladder = scale_ladder_limit(t, w).gram();

    dev.feed(detail::rel_deviation(reg_iter, reg_short, scale));
    dev.feed(detail::rel_deviation(reg_iter, reg_ladder, scale));
    dev.feed(detail::rel_deviation(reg_short, reg_ladder, scale));
  }
  return make_result("oracle_triple_agreement", dev, 1e-6);
}

PropertyResult run_variational_agreement(const VerifyOptions& opt) {
  check_options(opt);
  Rng rng(mix_seed(opt.seed, 22));
  Worst dev;
  for (int i = 0; i < opt.trials; ++i) {
    HermitianForm t = random_form(rng, opt.dim);
    HermitianForm w = random_form(rng, opt.dim);
    Vector x = random_vector(rng, opt.dim);
    double via_form = quadratic_eval(parallel_sum(t, w), x);
    double via_min = variational_minimum(t, w, x);
    double scale = 1.0 + (t.trace() + w.trace()) * x.squaredNorm();
    dev.feed(std::abs(via_form - via_min) / scale);
  }
  return make_result("variational_minimum_agreement", dev, 1e-9);
}

PropertyResult run_scalar_recursion() {
  // t = [1], w = [1]: iterates 1, 1/2, 1/6, 1/42; residuals 1/2, 1/3, 1/7.
  HermitianForm t = HermitianForm::identity(1);
  HermitianForm w = HermitianForm::identity(1);
  const double iterates[4] = {1.0, 0.5, 1.0 / 6.0, 1.0 / 42.0};
  Worst dev;
  HermitianForm cur = t;
  for (int n = 0; n < 4; ++n) {
    dev.feed(std::abs(cur.trace() - iterates[n]));
    dev.feed(std::abs(cur.gram()(0, 0).imag()));
    if (n < 3) cur = mu_step(cur, w);
  }
  IterationConfig cfg;
  cfg.epsilon = 1e-3;  // keep a short trace; values are what matters here
  DecompositionResult dec = iterate_decompose(t, w, cfg);
  const double residuals[3] = {0.5, 1.0 / 3.0, 1.0 / 7.0};
  for (int n = 0; n < 3 && n < static_cast<int>(dec.trace.residuals.size());
       ++n)
    dev.feed(std::abs(dec.trace.residuals[static_cast<size_t>(n)] -
                      residuals[n]));
  return make_result("scalar_recursion_closed_form", dev, 1e-14);
}

std::vector<PropertyResult> run_all(const VerifyOptions& opt) {
  std::vector<PropertyResult> out = run_parallel_sum_laws(opt);
  std::vector<PropertyResult> dec = run_decomposition_laws(opt);
  out.insert(out.end(), dec.begin(), dec.end());
  out.push_back(run_oracle_agreement(opt));
  out.push_back(run_variational_agreement(opt));
  out.push_back(run_scalar_recursion());
  return out;
}

}  // namespace parsum
