#include "doctest.h"

#include "parsum/charges.hpp"
#include "parsum/oracle.hpp"
#include "parsum/random.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace parsum;

namespace {

Charge make_charge(std::vector<std::string> atoms, std::vector<double> w) {
  Eigen::VectorXd v =
      Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return Charge(AtomSpace(std::move(atoms)), v);
}

Charge random_charge(Rng& rng, const AtomSpace& space, double p_zero = 0.3) {
  Eigen::VectorXd w(space.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = (rng.uniform() < p_zero) ? 0.0 : rng.uniform(0.25, 2.0);
  return Charge(space, w);
}

}  // namespace

TEST_CASE("atom space and charge validation") {
  CHECK_THROWS_AS(AtomSpace({}), std::invalid_argument);
  CHECK_THROWS_AS(AtomSpace({"a", "a"}), std::invalid_argument);
  CHECK(AtomSpace({"a", "b"}) == AtomSpace({"a", "b"}));
  CHECK_FALSE(AtomSpace({"a", "b"}) == AtomSpace({"b", "a"}));

  CHECK_THROWS_AS(make_charge({"a"}, {-0.5}), PsdError);
  CHECK_THROWS_AS(make_charge({"a"}, {std::nan("")}), PsdError);
  CHECK_THROWS_AS(make_charge({"a", "b"}, {1.0}), DimensionError);

  Charge mu = make_charge({"a", "b", "c"}, {2, 3, 5});
  CHECK(mu.total() == doctest::Approx(10.0));
  CHECK(mu.value({true, false, true}) == doctest::Approx(7.0));
  CHECK_THROWS_AS(mu.value({true}), DimensionError);
}

TEST_CASE("charge to form is the diagonal weighting") {
  Charge mu = make_charge({"a", "b"}, {2, 3});
  HermitianForm t = charge_to_form(mu);
  CHECK(t.dim() == 2);
  CHECK(t.gram()(0, 0).real() == 2.0);
  CHECK(t.gram()(1, 1).real() == 3.0);
  CHECK(std::abs(t.gram()(0, 1)) == 0.0);

  Vector phi(2);
  phi << Complex(1, 1), Complex(0, 2);
  // sum_a mu(a) |phi(a)|^2 = 2*2 + 3*4
  CHECK(quadratic_eval(t, phi) == doctest::Approx(16.0));
}

TEST_CASE("charge parallel sum closed form") {
  Charge mu = make_charge({"a", "b", "c"}, {2, 3, 5});
  Charge nu = make_charge({"a", "b", "c"}, {1, 0, 4});
  Charge p = charge_parallel_sum(mu, nu);
  CHECK(p.weights()[0] == doctest::Approx(2.0 / 3.0));
  CHECK(p.weights()[1] == 0.0);
  CHECK(p.weights()[2] == doctest::Approx(20.0 / 9.0));

  // Commutative, zero absorbs, 0:0 = 0.
  Charge q = charge_parallel_sum(nu, mu);
  CHECK((p.weights() - q.weights()).cwiseAbs().maxCoeff() == 0.0);
  Charge zero = make_charge({"a", "b", "c"}, {0, 0, 0});
  CHECK(charge_parallel_sum(mu, zero).total() == 0.0);
  CHECK(charge_parallel_sum(zero, zero).total() == 0.0);

  Charge other_space = make_charge({"x", "y", "z"}, {1, 1, 1});
  CHECK_THROWS_AS(charge_parallel_sum(mu, other_space), DimensionError);
}

TEST_CASE("charge parallel sum agrees with the form level") {
  Rng rng(31);
  AtomSpace space({"a", "b", "c", "d", "e"});
  for (int trial = 0; trial < 20; ++trial) {
    Charge mu = random_charge(rng, space);
    Charge nu = random_charge(rng, space);
    Charge p = charge_parallel_sum(mu, nu);
    HermitianForm pf = parallel_sum(charge_to_form(mu), charge_to_form(nu));
    for (Eigen::Index i = 0; i < space.size(); ++i)
      CHECK(std::abs(pf.gram()(i, i).real() - p.weights()[i]) < 1e-12);

    // Finite additivity over disjoint subsets, evaluated through the form:
    // the quadratic value at an indicator is the subset value.
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      Vector ind = Vector::Zero(5);
      std::vector<bool> bits(5);
      for (int b = 0; b < 5; ++b) {
        bits[static_cast<size_t>(b)] = mask & (1u << b);
        if (bits[static_cast<size_t>(b)]) ind[b] = 1.0;
      }
      CHECK(std::abs(quadratic_eval(pf, ind) - p.value(bits)) < 1e-12);
    }
  }
}

TEST_CASE("charge decomposition matches the closed form") {
  Charge mu = make_charge({"a", "b", "c"}, {2, 3, 5});
  Charge nu = make_charge({"a", "b", "c"}, {1, 0, 4});
  IterationConfig cfg;
  cfg.epsilon = 1e-13;
  auto [reg, sing] = decompose_charge(mu, nu, cfg);
  CHECK(std::abs(reg.weights()[0] - 2.0) < 1e-10);
  CHECK(std::abs(reg.weights()[1] - 0.0) < 1e-10);
  CHECK(std::abs(reg.weights()[2] - 5.0) < 1e-10);
  CHECK(std::abs(sing.weights()[0]) < 1e-10);
  CHECK(std::abs(sing.weights()[1] - 3.0) < 1e-10);
  CHECK(std::abs(sing.weights()[2]) < 1e-10);

  CHECK(check_absolute_continuity(reg, nu));
  CHECK(is_singular_pair(charge_to_form(sing), charge_to_form(nu)));
}

TEST_CASE("charge decomposition edge cases") {
  Charge mu = make_charge({"a", "b"}, {1, 2});
  Charge zero = make_charge({"a", "b"}, {0, 0});

  // Against zero everything is singular.
  auto [reg0, sing0] = decompose_charge(mu, zero);
  CHECK(reg0.total() < 1e-10);
  CHECK(std::abs(sing0.total() - mu.total()) < 1e-10);

  // Against a fully positive charge everything is regular.
  Charge pos = make_charge({"a", "b"}, {0.5, 4.0});
  IterationConfig cfg;
  cfg.epsilon = 1e-13;
  auto [reg1, sing1] = decompose_charge(mu, pos, cfg);
  CHECK(std::abs(reg1.total() - mu.total()) < 1e-10);
  CHECK(sing1.total() < 1e-10);

  // The zero charge decomposes to zero.
  auto [reg2, sing2] = decompose_charge(zero, mu);
  CHECK(reg2.total() == 0.0);
  CHECK(sing2.total() == 0.0);
}

TEST_CASE("random charge decompositions validate atomwise") {
  Rng rng(37);
  IterationConfig cfg;
  cfg.epsilon = 1e-13;
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng.bits() % 10);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
    AtomSpace space(labels);
    Charge mu = random_charge(rng, space);
    Charge nu = random_charge(rng, space);
    IterationTrace tr;
    auto [reg, sing] = decompose_charge(mu, nu, cfg, &tr);
    CHECK(tr.converged);
    for (Eigen::Index i = 0; i < space.size(); ++i) {
      double expect_reg = nu.weights()[i] > 0 ? mu.weights()[i] : 0.0;
      CHECK(std::abs(reg.weights()[i] - expect_reg) < 1e-10);
      CHECK(std::abs(sing.weights()[i] - (mu.weights()[i] - expect_reg)) <
            1e-10);
    }
  }
}

TEST_CASE("absolute continuity checks") {
  Charge nu = make_charge({"a", "b", "c"}, {1, 0, 4});
  CHECK(check_absolute_continuity(make_charge({"a", "b", "c"}, {2, 0, 5}), nu));
  CHECK_FALSE(
      check_absolute_continuity(make_charge({"a", "b", "c"}, {2, 3, 5}), nu));

  // Numerically null masses pass.
  CHECK(check_absolute_continuity(make_charge({"a", "b", "c"}, {2, 1e-12, 5}),
                                  nu));

  // The exhaustive epsilon-delta check agrees with the atomwise criterion.
  Rng rng(41);
  AtomSpace space({"p", "q", "r", "s", "t", "u"});
  for (int trial = 0; trial < 60; ++trial) {
    Charge mu = random_charge(rng, space, 0.4);
    Charge dom = random_charge(rng, space, 0.4);
    CHECK(check_absolute_continuity(mu, dom) ==
          check_absolute_continuity_exhaustive(mu, dom));
  }

  std::vector<std::string> big(21, "x");
  for (size_t i = 0; i < big.size(); ++i) big[i] += std::to_string(i);
  Charge too_big(AtomSpace(big), Eigen::VectorXd::Ones(21));
  CHECK_THROWS_AS(check_absolute_continuity_exhaustive(too_big, too_big),
                  std::invalid_argument);
}

TEST_CASE("parallel sum only sees the modulus of a step function") {
  Charge mu = make_charge({"a", "b"}, {2, 3});
  Charge nu = make_charge({"a", "b"}, {1, 4});

  StepFunction phi1;
  phi1.values = Vector(2);
  phi1.values << 1, -1;
  StepFunction phi2;
  phi2.values = Vector(2);
  phi2.values << Complex(0, 1), 2.0 * std::exp(Complex(0, M_PI / 3));
  CHECK(check_modulus_invariance(mu, nu, {phi1, phi2}));

  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    StepFunction phi;
    phi.values = random_vector(rng, 2);
    CHECK(check_modulus_invariance(mu, nu, {phi}));
  }

  StepFunction wrong;
  wrong.values = Vector(3);
  wrong.values.setZero();
  CHECK_THROWS_AS(check_modulus_invariance(mu, nu, {wrong}), DimensionError);
}

TEST_CASE("perturbed decompositions fail the uniqueness checks") {
  Charge mu = make_charge({"a", "b", "c"}, {2, 3, 5});
  Charge nu = make_charge({"a", "b", "c"}, {1, 0, 4});
  IterationConfig cfg;
  cfg.epsilon = 1e-13;
  auto [reg, sing] = decompose_charge(mu, nu, cfg);

  // Moving singular mass into the regular part breaks absolute continuity
  // (atom b is nu-null).
  Eigen::VectorXd reg_w = reg.weights();
  Eigen::VectorXd sing_w = sing.weights();
  reg_w[1] += 1e-3;
  sing_w[1] -= 1e-3;
  CHECK_FALSE(check_absolute_continuity(Charge(mu.space(), reg_w), nu));

  // Moving regular mass into the singular part breaks mutual singularity
  // (atom a carries nu-weight).
  reg_w = reg.weights();
  sing_w = sing.weights();
  reg_w[0] -= 1e-3;
  sing_w[0] += 1e-3;
  CHECK_FALSE(is_singular_pair(charge_to_form(Charge(mu.space(), sing_w)),
                               charge_to_form(nu)));
}
