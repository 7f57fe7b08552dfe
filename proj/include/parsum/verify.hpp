#pragma once

// Randomized property suites over the parallel-sum laws, the decomposition
// contract, and the oracle agreements. The CLI's verify command runs these
// at one dimension; the acceptance harness sweeps dimensions. Everything is
// deterministic in (seed, dim, trials).

#include "parsum/forms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace parsum {

struct VerifyOptions {
  std::uint64_t seed = 42;
  Eigen::Index dim = 4;
  int trials = 100;
};

struct PropertyResult {
  std::string name;
  bool pass = false;
  // Worst observed deviation (relative, per the property's own scale).
  double worst = 0.0;
  double threshold = 0.0;
};

// Order, arithmetic and continuity laws of the parallel sum, plus the
// polarization identity.
std::vector<PropertyResult> run_parallel_sum_laws(const VerifyOptions& opt);

// Iteration contract: monotone decrease, the telescoping bound t - t_n <= n w,
// the decomposition output contract, and the fixed-point characterization of
// mutually singular pairs.
std::vector<PropertyResult> run_decomposition_laws(const VerifyOptions& opt);

// Singular part: fixed-point iteration vs shorted operator vs scale-ladder
// limit, pairwise.
PropertyResult run_oracle_agreement(const VerifyOptions& opt);

// Variational characterization at random vectors.
PropertyResult run_variational_agreement(const VerifyOptions& opt);

// The scalar example with the closed-form iterate and residual sequences
// (dimension independent).
PropertyResult run_scalar_recursion();

// Everything above, in a fixed order.
std::vector<PropertyResult> run_all(const VerifyOptions& opt);

}  // namespace parsum
